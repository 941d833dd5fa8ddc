/*!
  \file netlist.hpp
  \brief Gate-level netlist over a cell library and static timing analysis
*/

#pragma once

#include "aig.hpp"
#include "cell_library.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aigopt
{

struct MappedGate
{
  uint32_t cell{ 0 };
  std::vector<uint32_t> inputs;
  uint32_t output{ 0 };
};

/*! \brief Cell instances in topological order.
 *
 * Net ids: PIs are 0..num_pis-1, then constant 0 and constant 1 (tie nets with
 * no driver cell), then one net per gate in gate order.
 */
class MappedNetlist
{
public:
  explicit MappedNetlist( uint32_t num_pis = 0 ) : num_pis_( num_pis ) {}

  uint32_t num_pis() const { return num_pis_; }
  uint32_t pi_net( uint32_t i ) const { return i; }
  uint32_t constant_net( bool value ) const { return num_pis_ + ( value ? 1u : 0u ); }
  bool is_constant_net( uint32_t net ) const { return net == num_pis_ || net == num_pis_ + 1u; }
  uint32_t num_nets() const { return num_pis_ + 2u + static_cast<uint32_t>( gates_.size() ); }

  uint32_t add_gate( uint32_t cell, std::vector<uint32_t> inputs )
  {
    uint32_t out = num_nets();
    for ( auto in : inputs )
      if ( in >= out )
        throw std::invalid_argument( "gate input refers to a later net" );
    gates_.push_back( MappedGate{ cell, std::move( inputs ), out } );
    return out;
  }

  void add_po( uint32_t net )
  {
    if ( net >= num_nets() )
      throw std::invalid_argument( "PO refers to an unknown net" );
    pos_.push_back( net );
  }

  std::vector<MappedGate> const& gates() const { return gates_; }
  std::vector<uint32_t> const& pos() const { return pos_; }

  double area( CellLibrary const& lib ) const
  {
    double a = 0;
    for ( auto const& g : gates_ )
      a += lib.cell( g.cell ).area;
    return a;
  }

private:
  uint32_t num_pis_;
  std::vector<MappedGate> gates_;
  std::vector<uint32_t> pos_;
};

struct TimingReport
{
  double delay{ 0 };
  double area{ 0 };
  std::vector<double> arrival; //!< per net
  std::vector<double> load;    //!< per net
};

/*! \brief Capacitive load on every net.
 *
 * Sum of driven pin capacitances, plus the wire capacitance per fanout (each
 * PO reference counts as one), plus the default output load once for a net
 * that drives at least one PO.
 */
inline std::vector<double> net_loads( MappedNetlist const& nl, CellLibrary const& lib )
{
  std::vector<double> load( nl.num_nets(), 0.0 );
  for ( auto const& g : nl.gates() )
  {
    auto const& c = lib.cell( g.cell );
    for ( size_t i = 0; i < g.inputs.size(); ++i )
      load[g.inputs[i]] += c.input_caps[i] + lib.wire_cap_per_fanout();
  }
  std::vector<bool> drives_po( nl.num_nets(), false );
  for ( auto net : nl.pos() )
  {
    load[net] += lib.wire_cap_per_fanout();
    if ( !drives_po[net] )
      load[net] += lib.default_output_load();
    drives_po[net] = true;
  }
  return load;
}

/*! \brief Topological arrival-time propagation with load-dependent gate delays; PIs and tie nets arrive at 0. */
inline TimingReport analyze_timing( MappedNetlist const& nl, CellLibrary const& lib )
{
  TimingReport r;
  r.load = net_loads( nl, lib );
  r.arrival.assign( nl.num_nets(), 0.0 );
  for ( auto const& g : nl.gates() )
  {
    auto const& c = lib.cell( g.cell );
    if ( g.inputs.size() != c.num_inputs )
      throw std::invalid_argument( "gate pin count differs from cell " + c.name );
    double in = 0;
    for ( auto net : g.inputs )
      in = std::max( in, r.arrival[net] );
    r.arrival[g.output] = in + c.intrinsic_delay + c.load_slope * r.load[g.output];
    r.area += c.area;
  }
  for ( auto net : nl.pos() )
    r.delay = std::max( r.delay, r.arrival[net] );
  return r;
}

/*! \brief Re-expresses the netlist as an AIG, for equivalence checking. */
inline Aig netlist_to_aig( MappedNetlist const& nl, CellLibrary const& lib, std::string name = {} )
{
  AigBuilder b;
  std::vector<Edge> net( nl.num_nets() );
  for ( uint32_t i = 0; i < nl.num_pis(); ++i )
    net[i] = b.create_pi();
  net[nl.constant_net( false )] = Edge::constant( false );
  net[nl.constant_net( true )] = Edge::constant( true );
  for ( auto const& g : nl.gates() )
  {
    auto const& c = lib.cell( g.cell );
    // Shannon expansion over pins, highest pin first
    auto expand = [&]( auto&& self, uint32_t pin, uint32_t fixed ) -> Edge {
      if ( pin == 0 )
        return Edge::constant( ( c.function >> fixed ) & 1u );
      uint32_t p = pin - 1;
      Edge lo = self( self, p, fixed );
      Edge hi = self( self, p, fixed | ( 1u << p ) );
      return b.create_mux( net[g.inputs[p]], hi, lo );
    };
    net[g.output] = expand( expand, c.num_inputs, 0 );
  }
  for ( auto n : nl.pos() )
    b.create_po( net[n] );
  return b.build( std::move( name ) );
}

} // namespace aigopt
