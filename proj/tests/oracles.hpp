#pragma once

#include "test_support.hpp"

#include <aigopt/gbdt.hpp>
#include <aigopt/netlist.hpp>
#include <aigopt/optimizer.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

/* brute-force references shared by the unit tests and the acceptance run */
namespace aigopt::test
{

inline Aig identity_circuit()
{
  AigBuilder b;
  b.create_po( b.create_pi() );
  return b.build();
}

inline Aig single_and()
{
  AigBuilder b;
  auto x = b.create_pi(), y = b.create_pi();
  b.create_po( b.create_and( x, y ) );
  return b.build();
}

inline Aig chain()
{
  AigBuilder b;
  auto x = b.create_pi(), y = b.create_pi(), z = b.create_pi();
  b.create_po( b.create_and( b.create_and( x, y ), z ) );
  return b.build();
}

inline Aig diamond()
{
  AigBuilder b;
  auto x = b.create_pi(), y = b.create_pi(), z = b.create_pi(), w = b.create_pi();
  auto n1 = b.create_and( x, y );
  auto n2 = b.create_and( n1, z );
  auto n3 = b.create_and( n1, w );
  b.create_po( b.create_and( n2, n3 ) );
  return b.build();
}

inline Aig binary_tree( uint32_t depth )
{
  AigBuilder b;
  std::vector<Edge> layer;
  for ( uint32_t i = 0; i < ( 1u << depth ); ++i )
    layer.push_back( b.create_pi() );
  while ( layer.size() > 1 )
  {
    std::vector<Edge> next;
    for ( size_t i = 0; i < layer.size(); i += 2 )
      next.push_back( b.create_and( layer[i], layer[i + 1] ) );
    layer = next;
  }
  b.create_po( layer[0] );
  return b.build();
}

/* hand-built graphs, the data files and random graphs with at most 12 AND nodes */
inline std::vector<Aig> small_fixtures()
{
  std::vector<Aig> v{ identity_circuit(), single_and(), chain(), diamond(), load_data( "eight_gate.aag" ), load_data( "diamond.aag" ) };
  for ( uint64_t s = 0; s < 200; ++s )
  {
    auto a = random_aig( 2 + s % 5, 1 + s % 12, 1 + s % 4, s, 5 );
    if ( a.num_ands() <= 12 )
      v.push_back( a );
  }
  return v;
}

struct brute_profile
{
  std::vector<double> unit, fanout, binary, paths;
};

inline std::vector<uint32_t> count_references( Aig const& aig )
{
  std::vector<uint32_t> refs( aig.num_nodes(), 0 );
  for ( node_id n = aig.first_and(); n < aig.num_nodes(); ++n )
  {
    ++refs[aig.fanin0( n ).node()];
    ++refs[aig.fanin1( n ).node()];
  }
  for ( auto po : aig.pos() )
    ++refs[po.node()];
  return refs;
}

/* maxima and counts over explicitly enumerated PI-to-driver paths */
inline brute_profile brute_force_profile( Aig const& aig )
{
  auto refs = count_references( aig );
  brute_profile p;
  for ( auto po : aig.pos() )
  {
    double unit = 0, fan = 0, bin = 0, count = 0;
    std::vector<node_id> suffix;
    enumerate_paths( aig, po.node(), suffix, [&]( std::vector<node_id> const& path ) {
      if ( !aig.is_pi( path.front() ) )
        return;
      double u = 0, f = 0, b = 0;
      for ( auto n : path )
      {
        u += 1;
        f += refs[n];
        b += refs[n] >= 2 ? 1 : 0;
      }
      unit = std::max( unit, u );
      fan = std::max( fan, f );
      bin = std::max( bin, b );
      count += 1;
    } );
    p.unit.push_back( unit );
    p.fanout.push_back( fan );
    p.binary.push_back( bin );
    p.paths.push_back( count );
  }
  return p;
}

/* longest PI-to-PO path by explicit enumeration of gate paths */
inline double brute_force_delay( MappedNetlist const& nl, CellLibrary const& lib )
{
  auto load = net_loads( nl, lib );
  uint32_t first_gate_net = nl.num_pis() + 2;
  double best = 0;
  std::vector<uint32_t> suffix;
  std::function<void( uint32_t )> walk = [&]( uint32_t net ) {
    if ( net < first_gate_net )
    {
      // accumulate from the source end, as arrival propagation does
      double t = 0;
      for ( auto it = suffix.rbegin(); it != suffix.rend(); ++it )
      {
        auto const& g = nl.gates()[*it];
        auto const& c = lib.cell( g.cell );
        t = t + c.intrinsic_delay + c.load_slope * load[g.output];
      }
      best = std::max( best, t );
      return;
    }
    uint32_t g = net - first_gate_net;
    suffix.push_back( g );
    for ( auto in : nl.gates()[g].inputs )
      walk( in );
    suffix.pop_back();
  };
  for ( auto po : nl.pos() )
    walk( po );
  return best;
}

inline MappedNetlist random_netlist( CellLibrary const& lib, uint64_t seed, uint32_t num_pis, uint32_t num_gates )
{
  std::mt19937_64 rng( seed );
  MappedNetlist nl( num_pis );
  for ( uint32_t i = 0; i < num_gates; ++i )
  {
    uint32_t cell = static_cast<uint32_t>( rng() % lib.cells().size() );
    std::vector<uint32_t> ins;
    for ( uint32_t p = 0; p < lib.cell( cell ).num_inputs; ++p )
    {
      uint32_t lo = nl.num_nets() > 8 ? nl.num_nets() - 8 : 0;
      ins.push_back( lo + static_cast<uint32_t>( rng() % ( nl.num_nets() - lo ) ) );
    }
    nl.add_gate( cell, ins );
  }
  for ( uint32_t i = 0; i < 1 + rng() % 4; ++i )
    nl.add_po( nl.num_nets() - 1 - static_cast<uint32_t>( rng() % std::min<uint32_t>( nl.num_nets(), 6 ) ) );
  return nl;
}

inline std::vector<std::string> column_names( size_t w )
{
  std::vector<std::string> h;
  for ( size_t i = 0; i < w; ++i )
    h.push_back( "f" + std::to_string( i ) );
  return h;
}

/* labels linear in the first and last feature plus uniform noise */
inline Dataset random_dataset( uint64_t seed, size_t rows, size_t width, bool integer_features )
{
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution<double> u( 0, 1 );
  Dataset d( column_names( width ) );
  for ( size_t i = 0; i < rows; ++i )
  {
    std::vector<double> x( width );
    for ( auto& v : x )
      v = integer_features ? std::floor( u( rng ) * 4 ) : u( rng );
    double y = 2 * x[0] - x[width - 1] + 0.3 * u( rng );
    d.add( x, y );
  }
  return d;
}

struct oracle_split
{
  int32_t feature{ -1 };
  double threshold{ 0 };
};

/* every (feature, midpoint) candidate scored by direct summation */
inline oracle_split exhaustive_split( Dataset const& d, uint32_t min_leaf )
{
  size_t n = d.size();
  double total = 0;
  for ( size_t i = 0; i < n; ++i )
    total += d.label( i );
  double mean = total / n;
  std::vector<double> r( n );
  for ( size_t i = 0; i < n; ++i )
    r[i] = d.label( i ) - mean;
  double rs = 0;
  for ( double v : r )
    rs += v;

  oracle_split best;
  double best_gain = 0;
  for ( size_t f = 0; f < d.width(); ++f )
  {
    std::vector<double> values;
    for ( size_t i = 0; i < n; ++i )
      values.push_back( d.row( i )[f] );
    std::sort( values.begin(), values.end() );
    values.erase( std::unique( values.begin(), values.end() ), values.end() );
    for ( size_t k = 0; k + 1 < values.size(); ++k )
    {
      double t = detail::midpoint( values[k], values[k + 1] );
      double sl = 0;
      uint32_t nl = 0;
      for ( size_t i = 0; i < n; ++i )
        if ( d.row( i )[f] <= t )
        {
          sl += r[i];
          ++nl;
        }
      uint32_t nr = static_cast<uint32_t>( n ) - nl;
      if ( nl < min_leaf || nr < min_leaf )
        continue;
      double sr = rs - sl;
      double gain = sl * sl / nl + sr * sr / nr - rs * rs / n;
      if ( detail::better_gain( gain, best.feature < 0 ? 0.0 : best_gain ) )
      {
        best = { static_cast<int32_t>( f ), t };
        best_gain = gain;
      }
    }
  }
  return best;
}

/* points not weakly dominated by any other; of identical points only the first survives */
inline std::vector<FrontPoint> brute_force_front( std::vector<FrontPoint> const& pts )
{
  std::vector<FrontPoint> out;
  for ( size_t i = 0; i < pts.size(); ++i )
  {
    bool keep = true;
    for ( size_t j = 0; j < pts.size() && keep; ++j )
    {
      if ( i == j )
        continue;
      auto const &p = pts[i], &q = pts[j];
      bool dominates = q.delay <= p.delay && q.area <= p.area && ( q.delay < p.delay || q.area < p.area );
      bool earlier_twin = q.delay == p.delay && q.area == p.area && j < i;
      keep = !dominates && !earlier_twin;
    }
    if ( keep )
      out.push_back( pts[i] );
  }
  std::sort( out.begin(), out.end(), []( auto const& a, auto const& b ) { return a.delay < b.delay; } );
  return out;
}

} // namespace aigopt::test
