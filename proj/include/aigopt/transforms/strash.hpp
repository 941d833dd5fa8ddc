/*!
  \file strash.hpp
  \brief Structural-hash rebuild with two-level redundancy rules
*/

#pragma once

#include "../aig.hpp"

#include <vector>

namespace aigopt
{

namespace detail
{

/* AND creation that also looks one level into AND fanins:
 *   (x & y) & x      = x & y
 *   (x & y) & !x     = 0
 *   !(x & y) & !x    = !x
 *   !(x & y) & x     = x & !y
 *   (x & y) & (!x & z) = 0
 */
class two_level_builder
{
public:
  explicit two_level_builder( AigBuilder& b ) : b_( b ) {}

  Edge create_and( Edge a, Edge c )
  {
    for ( int pass = 0; pass < 2; ++pass )
    {
      if ( auto r = one_sided( a, c ) )
        return *r;
      std::swap( a, c );
    }
    if ( !a.complemented() && !c.complemented() && b_.is_and( a.node() ) && b_.is_and( c.node() ) )
    {
      Edge a0 = b_.fanin0( a.node() ), a1 = b_.fanin1( a.node() );
      Edge c0 = b_.fanin0( c.node() ), c1 = b_.fanin1( c.node() );
      if ( a0 == !c0 || a0 == !c1 || a1 == !c0 || a1 == !c1 )
        return Edge::constant( false );
    }
    return b_.create_and( a, c );
  }

private:
  std::optional<Edge> one_sided( Edge a, Edge c )
  {
    if ( a.node() == 0 || !b_.is_and( a.node() ) )
      return std::nullopt;
    Edge x = b_.fanin0( a.node() ), y = b_.fanin1( a.node() );
    if ( !a.complemented() )
    {
      if ( c == x || c == y )
        return a;
      if ( c == !x || c == !y )
        return Edge::constant( false );
    }
    else
    {
      if ( c == !x || c == !y )
        return c;
      if ( c == x )
        return b_.create_and( x, !y );
      if ( c == y )
        return b_.create_and( y, !x );
    }
    return std::nullopt;
  }

  AigBuilder& b_;
};

} // namespace detail

/*! \brief Rebuilds the AIG through the structural hash, folding constants and two-level redundancies. */
inline Aig strash( Aig const& aig )
{
  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  detail::two_level_builder tl( b );
  std::vector<Edge> map( aig.num_nodes() );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    map[aig.pi_node( i )] = pis[i];
  aig.foreach_and( [&]( node_id n ) {
    Edge e0 = aig.fanin0( n ), e1 = aig.fanin1( n );
    map[n] = tl.create_and( map[e0.node()] ^ e0.complemented(), map[e1.node()] ^ e1.complemented() );
  } );
  for ( auto po : aig.pos() )
    b.create_po( map[po.node()] ^ po.complemented() );
  return b.build( aig.name() );
}

} // namespace aigopt
