/*!
  \file refactor.hpp
  \brief Cone collapsing and Shannon re-synthesis
*/

#pragma once

#include "../aig.hpp"
#include "../synthesis.hpp"
#include "../truth_table.hpp"
#include "accounting.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace aigopt
{

struct RefactorParams
{
  uint32_t max_leaves{ 8 };
  /*! \brief Cones whose fanout-free part is smaller than this are left alone. */
  uint32_t min_cone{ 3 };
  bool allow_zero_gain{ false };
};

namespace detail
{

/*! \brief Grows a reconvergence-driven cut below `root` with at most `limit` leaves. */
inline void reconvergent_cut( Aig const& aig, node_id root, uint32_t limit, std::vector<node_id>& leaves, std::vector<uint32_t>& mark,
                              uint32_t stamp )
{
  leaves.clear();
  mark[root] = stamp;
  for ( Edge e : { aig.fanin0( root ), aig.fanin1( root ) } )
  {
    if ( mark[e.node()] != stamp )
    {
      mark[e.node()] = stamp;
      leaves.push_back( e.node() );
    }
  }
  while ( true )
  {
    int best = -1;
    int best_cost = 3;
    for ( size_t i = 0; i < leaves.size(); ++i )
    {
      node_id l = leaves[i];
      if ( !aig.is_and( l ) )
        continue;
      int cost = -1;
      for ( Edge e : { aig.fanin0( l ), aig.fanin1( l ) } )
        cost += mark[e.node()] == stamp ? 0 : 1;
      if ( cost < best_cost || ( cost == best_cost && best >= 0 && l > leaves[best] ) )
      {
        best_cost = cost;
        best = static_cast<int>( i );
      }
    }
    if ( best < 0 || leaves.size() + best_cost > limit )
      break;
    node_id l = leaves[best];
    leaves.erase( leaves.begin() + best );
    for ( Edge e : { aig.fanin0( l ), aig.fanin1( l ) } )
    {
      if ( mark[e.node()] != stamp )
      {
        mark[e.node()] = stamp;
        leaves.push_back( e.node() );
      }
    }
  }
}

/*! \brief Function of `root` over `leaves`, computed by simulating the cone. */
inline TruthTable cone_function( Aig const& aig, node_id root, std::vector<node_id> const& leaves )
{
  uint32_t k = static_cast<uint32_t>( leaves.size() );
  std::unordered_map<node_id, TruthTable> value;
  for ( uint32_t i = 0; i < k; ++i )
    value.emplace( leaves[i], TruthTable::nth_var( k, i ) );
  std::vector<node_id> stack{ root };
  while ( !stack.empty() )
  {
    node_id n = stack.back();
    if ( value.count( n ) )
    {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for ( Edge e : { aig.fanin0( n ), aig.fanin1( n ) } )
    {
      if ( !value.count( e.node() ) )
      {
        stack.push_back( e.node() );
        ready = false;
      }
    }
    if ( ready )
    {
      stack.pop_back();
      Edge a = aig.fanin0( n ), c = aig.fanin1( n );
      TruthTable ta = value.at( a.node() ), tc = value.at( c.node() );
      if ( a.complemented() )
        ta = ~ta;
      if ( c.complemented() )
        tc = ~tc;
      value.emplace( n, ta & tc );
    }
  }
  return value.at( root );
}

} // namespace detail

/*! \brief Collapses each node's cone (up to `max_leaves` inputs) and re-synthesises it when smaller.
 *
 * The cone function is rebuilt by greedy Shannon decomposition over a
 * seeded permutation of the leaves, directly in the new graph.  It replaces
 * the original node when it keeps fewer nodes alive than the original AND
 * (or as many, with `allow_zero_gain`).
 */
inline Aig refactor( Aig const& aig, RefactorParams const& ps = {}, uint64_t seed = 0 )
{
  std::mt19937_64 rng( seed );
  auto refs = fanout_counts( aig );
  std::vector<uint32_t> mark( aig.num_nodes(), 0 );
  uint32_t stamp = 0;

  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  detail::live_tracker live( b );
  std::vector<Edge> map( aig.num_nodes() );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    map[aig.pi_node( i )] = pis[i];
  auto image = [&]( Edge e ) { return map[e.node()] ^ e.complemented(); };

  std::vector<node_id> leaves;
  std::vector<Edge> mapped_leaves;
  aig.foreach_and( [&]( node_id n ) {
    Edge i0 = image( aig.fanin0( n ) ), i1 = image( aig.fanin1( n ) );
    live.deref( i0 );
    live.deref( i1 );
    map[n] = b.create_and( i0, i1 );
    auto keep = [&] {
      for ( uint32_t r = 0; r < refs[n]; ++r )
        live.ref( map[n] );
    };
    uint32_t base = live.revival_cost( map[n] );
    if ( base < ps.min_cone )
      return keep();
    detail::reconvergent_cut( aig, n, ps.max_leaves, leaves, mark, ++stamp );
    if ( leaves.size() < 3 )
      return keep();

    std::shuffle( leaves.begin(), leaves.end(), rng );
    TruthTable f = detail::cone_function( aig, n, leaves );
    mapped_leaves.clear();
    for ( auto l : leaves )
      mapped_leaves.push_back( map[l] );
    Edge candidate = ShannonSynthesizer( b, mapped_leaves ).run( f );
    uint32_t cost = live.revival_cost( candidate );
    if ( cost < base || ( cost == base && ps.allow_zero_gain ) )
      map[n] = candidate;
    keep();
  } );

  for ( auto po : aig.pos() )
    b.create_po( image( po ) );
  return b.build( aig.name() );
}

} // namespace aigopt
