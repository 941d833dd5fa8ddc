/*!
  \file mapper.hpp
  \brief Delay-oriented cut-based technology mapping and ground-truth evaluation
*/

#pragma once

#include "aig.hpp"
#include "cell_library.hpp"
#include "cuts.hpp"
#include "netlist.hpp"
#include "truth_table.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aigopt
{

class MappingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct MapperParams
{
  CutParams cuts{ 4, 8 };
};

namespace detail
{

struct map_choice
{
  enum class kind : uint8_t
  {
    none,
    pi,
    constant,
    wire,
    gate,
    inverter
  };
  kind type{ kind::none };
  bool value{ false }; // constant value, or source phase for wire
  CellMatch const* match{ nullptr };
  std::array<node_id, 4> leaves{};
  double arrival{ std::numeric_limits<double>::infinity() };
  double flow{ std::numeric_limits<double>::infinity() };
  double area{ 0 };
  uint32_t rank{ 0 };

  bool better_than( map_choice const& o ) const
  {
    if ( arrival != o.arrival )
      return arrival < o.arrival;
    if ( flow != o.flow )
      return flow < o.flow;
    if ( area != o.area )
      return area < o.area;
    return rank < o.rank;
  }
};

} // namespace detail

/*! \brief Maps `aig` onto `lib`.
 *
 * Each node is solved in both output phases.  Candidates are library cells
 * matched against the node's 4-feasible cut functions under any pin
 * permutation and input inversion; a phase may also be taken from the other
 * phase through an inverter.  Candidates are ranked by estimated arrival, then
 * area flow, then cell area, then cell name.  Gate delays during mapping use a
 * load estimate from the AIG fanout count; final timing is computed on the
 * extracted netlist by analyze_timing().
 */
inline MappedNetlist map_aig( Aig const& aig, CellLibrary const& lib, MapperParams const& ps = {} )
{
  using detail::map_choice;
  using kind = map_choice::kind;

  auto cuts = enumerate_cuts( aig, ps.cuts );
  auto refs = fanout_counts( aig );
  std::vector<bool> drives_po( aig.num_nodes(), false );
  for ( auto po : aig.pos() )
    drives_po[po.node()] = true;

  auto const& inv = lib.cell( lib.inverter() );
  auto est_load = [&]( node_id n ) {
    return refs[n] * ( lib.mean_input_cap() + lib.wire_cap_per_fanout() ) + ( drives_po[n] ? lib.default_output_load() : 0.0 );
  };
  auto div = [&]( node_id n ) { return static_cast<double>( std::max<uint32_t>( 1u, refs[n] ) ); };

  std::vector<std::array<map_choice, 2>> best( aig.num_nodes() );

  auto relax = [&]( node_id n ) {
    auto base = best[n];
    double d = inv.intrinsic_delay + inv.load_slope * est_load( n );
    for ( int p = 0; p < 2; ++p )
    {
      auto const& src = base[1 - p];
      if ( src.type == kind::none || src.type == kind::inverter )
        continue;
      map_choice c;
      c.type = kind::inverter;
      c.arrival = src.arrival + d;
      c.flow = ( inv.area + src.flow ) / div( n );
      c.area = inv.area;
      c.rank = lib.name_rank( lib.inverter() );
      if ( c.better_than( best[n][p] ) )
        best[n][p] = c;
    }
  };

  best[0][0].type = best[0][1].type = kind::constant;
  best[0][0].value = false;
  best[0][1].value = true;
  best[0][0].arrival = best[0][1].arrival = 0;
  best[0][0].flow = best[0][1].flow = 0;
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    node_id n = aig.pi_node( i );
    best[n][0].type = kind::pi;
    best[n][0].arrival = 0;
    best[n][0].flow = 0;
    relax( n );
  }

  aig.foreach_and( [&]( node_id n ) {
    double load = est_load( n );
    for ( auto const& cut : cuts[n] )
    {
      if ( cut.is_trivial_of( n ) )
        continue;
      uint32_t support = tt4::support( cut.function );
      uint32_t k = 0;
      uint16_t f = tt4::shrink_to_support( cut.function, support, k );
      std::array<node_id, 4> leaves{};
      for ( uint32_t v = 0, j = 0; v < cut.size; ++v )
        if ( support & ( 1u << v ) )
          leaves[j++] = cut.leaves[v];

      for ( int p = 0; p < 2; ++p )
      {
        uint16_t g = p ? static_cast<uint16_t>( ~f ) : f;
        map_choice c;
        c.leaves = leaves;
        if ( k == 0 )
        {
          c.type = kind::constant;
          c.value = ( g & 1u ) != 0;
          c.arrival = 0;
          c.flow = 0;
          if ( c.better_than( best[n][p] ) )
            best[n][p] = c;
          continue;
        }
        if ( k == 1 )
        {
          bool phase = g != tt4::nth_var( 0 );
          auto const& src = best[leaves[0]][phase];
          c.type = kind::wire;
          c.value = phase;
          c.arrival = src.arrival;
          c.flow = src.flow;
          if ( c.better_than( best[n][p] ) )
            best[n][p] = c;
          continue;
        }
        for ( auto const& m : lib.matches( k, g ) )
        {
          auto const& cell = lib.cell( m.cell );
          double arrival = 0, flow = cell.area;
          for ( uint32_t pin = 0; pin < k; ++pin )
          {
            auto const& src = best[leaves[m.pin_leaf[pin]]][( m.pin_negated >> pin ) & 1u];
            arrival = std::max( arrival, src.arrival );
            flow += src.flow;
          }
          c.type = kind::gate;
          c.match = &m;
          c.arrival = arrival + cell.intrinsic_delay + cell.load_slope * load;
          c.flow = flow / div( n );
          c.area = cell.area;
          c.rank = lib.name_rank( m.cell );
          if ( c.better_than( best[n][p] ) )
            best[n][p] = c;
        }
      }
    }
    relax( n );
    if ( best[n][0].type == kind::none || best[n][1].type == kind::none )
      throw MappingError( "no library match for AND node " + std::to_string( n ) );
  } );

  // cover extraction
  MappedNetlist nl( aig.num_pis() );
  constexpr uint32_t unset = std::numeric_limits<uint32_t>::max();
  std::vector<std::array<uint32_t, 2>> net( aig.num_nodes(), { unset, unset } );
  net[0] = { nl.constant_net( false ), nl.constant_net( true ) };
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    net[aig.pi_node( i )][0] = nl.pi_net( i );

  std::vector<std::pair<node_id, uint8_t>> stack;
  auto deps = [&]( node_id n, uint8_t p, auto&& visit ) {
    auto const& c = best[n][p];
    switch ( c.type )
    {
    case kind::inverter: visit( n, uint8_t( 1 - p ) ); break;
    case kind::wire: visit( c.leaves[0], uint8_t( c.value ) ); break;
    case kind::gate:
      for ( uint32_t pin = 0; pin < lib.cell( c.match->cell ).num_inputs; ++pin )
        visit( c.leaves[c.match->pin_leaf[pin]], uint8_t( ( c.match->pin_negated >> pin ) & 1u ) );
      break;
    default: break;
    }
  };
  auto realize = [&]( node_id root, uint8_t root_phase ) {
    stack.assign( 1, { root, root_phase } );
    while ( !stack.empty() )
    {
      auto [n, p] = stack.back();
      if ( net[n][p] != unset )
      {
        stack.pop_back();
        continue;
      }
      bool ready = true;
      deps( n, p, [&]( node_id m, uint8_t q ) {
        if ( net[m][q] == unset )
        {
          ready = false;
          stack.emplace_back( m, q );
        }
      } );
      if ( !ready )
        continue;
      stack.pop_back();
      auto const& c = best[n][p];
      switch ( c.type )
      {
      case kind::constant: net[n][p] = nl.constant_net( c.value ); break;
      case kind::inverter: net[n][p] = nl.add_gate( lib.inverter(), { net[n][1 - p] } ); break;
      case kind::wire: net[n][p] = net[c.leaves[0]][c.value]; break;
      case kind::gate:
      {
        std::vector<uint32_t> ins;
        for ( uint32_t pin = 0; pin < lib.cell( c.match->cell ).num_inputs; ++pin )
          ins.push_back( net[c.leaves[c.match->pin_leaf[pin]]][( c.match->pin_negated >> pin ) & 1u] );
        net[n][p] = nl.add_gate( c.match->cell, std::move( ins ) );
        break;
      }
      default: throw MappingError( "inconsistent mapping choice" );
      }
    }
  };

  for ( auto po : aig.pos() )
  {
    realize( po.node(), po.complemented() ? 1 : 0 );
    nl.add_po( net[po.node()][po.complemented() ? 1 : 0] );
  }
  return nl;
}

/*! \brief Post-mapping critical-path delay and total cell area. */
struct GroundTruth
{
  double delay{ 0 };
  double area{ 0 };
};

inline GroundTruth ground_truth( Aig const& aig, CellLibrary const& lib, MapperParams const& ps = {} )
{
  auto nl = map_aig( aig, lib, ps );
  auto t = analyze_timing( nl, lib );
  return { t.delay, t.area };
}

} // namespace aigopt
