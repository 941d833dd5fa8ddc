/*!
  \file balance.hpp
  \brief Depth-oriented AND-tree rebalancing
*/

#pragma once

#include "../aig.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <vector>

namespace aigopt
{

struct BalanceParams
{
  /*! \brief Also collapse through nodes with two uncomplemented AND fanouts (duplicates logic). */
  bool allow_duplication{ false };
  /*! \brief Leaf cap for supergates grown through duplicated nodes. */
  uint32_t max_duplicated_leaves{ 8 };
};

/*! \brief Rebuilds every multi-input AND supergate as a tree of minimum depth.
 *
 * A supergate is grown from its root through uncomplemented fanin edges into
 * AND nodes that have no other use (or, with duplication, up to two uses).
 * Its leaves are combined pairwise, always joining the two shallowest
 * available signals; equal-level ties are ordered by a seeded shuffle.
 */
inline Aig balance( Aig const& aig, BalanceParams const& ps = {}, uint64_t seed = 0 )
{
  std::mt19937_64 rng( seed );
  uint32_t const num_nodes = aig.num_nodes();
  std::vector<uint32_t> refs( num_nodes, 0 );
  std::vector<uint8_t> blocked( num_nodes, 0 ); // referenced complemented or by a PO
  aig.foreach_and( [&]( node_id n ) {
    for ( Edge e : { aig.fanin0( n ), aig.fanin1( n ) } )
    {
      ++refs[e.node()];
      if ( e.complemented() )
        blocked[e.node()] = 1;
    }
  } );
  for ( auto po : aig.pos() )
  {
    ++refs[po.node()];
    blocked[po.node()] = 1;
  }
  uint32_t const ref_limit = ps.allow_duplication ? 2u : 1u;
  auto expandable = [&]( node_id n ) { return aig.is_and( n ) && !blocked[n] && refs[n] <= ref_limit; };

  auto collect = [&]( node_id root, std::vector<Edge>& leaves ) {
    leaves.clear();
    std::vector<Edge> stack{ aig.fanin1( root ), aig.fanin0( root ) };
    uint32_t const cap = ps.allow_duplication ? std::max<uint32_t>( 2, ps.max_duplicated_leaves ) : ~0u;
    while ( !stack.empty() )
    {
      Edge e = stack.back();
      stack.pop_back();
      if ( !e.complemented() && expandable( e.node() ) && leaves.size() + stack.size() + 2 <= cap )
      {
        stack.push_back( aig.fanin1( e.node() ) );
        stack.push_back( aig.fanin0( e.node() ) );
      }
      else
      {
        leaves.push_back( e );
      }
    }
  };

  // mark the supergate roots that the outputs actually need
  std::vector<uint8_t> needed( num_nodes, 0 );
  for ( auto po : aig.pos() )
    needed[po.node()] = 1;
  std::vector<std::vector<Edge>> leaves_of( num_nodes );
  for ( node_id n = num_nodes; n-- > aig.first_and(); )
  {
    if ( !needed[n] )
      continue;
    collect( n, leaves_of[n] );
    for ( Edge e : leaves_of[n] )
      needed[e.node()] = 1;
  }

  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  std::vector<Edge> map( num_nodes );
  std::vector<uint32_t> level( b.size(), 0 );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    map[aig.pi_node( i )] = pis[i];

  struct item
  {
    uint32_t level;
    uint64_t tie;
    Edge edge;
    bool operator>( item const& o ) const { return level != o.level ? level > o.level : tie > o.tie; }
  };

  auto level_of = [&]( Edge e ) { return e.node() < level.size() ? level[e.node()] : 0u; };
  auto make_and = [&]( Edge x, Edge y ) {
    Edge r = b.create_and( x, y );
    if ( r.node() >= level.size() )
    {
      level.resize( b.size(), 0 );
      level[r.node()] = 1 + std::max( level_of( x ), level_of( y ) );
    }
    return r;
  };

  std::vector<Edge> mapped;
  for ( node_id n = aig.first_and(); n < num_nodes; ++n )
  {
    if ( !needed[n] )
      continue;
    mapped.clear();
    for ( Edge e : leaves_of[n] )
      mapped.push_back( map[e.node()] ^ e.complemented() );
    std::sort( mapped.begin(), mapped.end() );
    mapped.erase( std::unique( mapped.begin(), mapped.end() ), mapped.end() );
    bool contradiction = false;
    for ( size_t i = 0; i + 1 < mapped.size(); ++i )
      contradiction = contradiction || mapped[i] == !mapped[i + 1];
    if ( contradiction || ( !mapped.empty() && mapped.front() == Edge::constant( false ) ) )
    {
      map[n] = Edge::constant( false );
      continue;
    }
    std::priority_queue<item, std::vector<item>, std::greater<item>> queue;
    for ( Edge e : mapped )
      queue.push( { level_of( e ), rng(), e } );
    while ( queue.size() > 1 )
    {
      item x = queue.top();
      queue.pop();
      item y = queue.top();
      queue.pop();
      Edge r = make_and( x.edge, y.edge );
      queue.push( { level_of( r ), rng(), r } );
    }
    map[n] = queue.empty() ? Edge::constant( true ) : queue.top().edge;
  }

  for ( auto po : aig.pos() )
    b.create_po( map[po.node()] ^ po.complemented() );
  return b.build( aig.name() );
}

} // namespace aigopt
