/*!
  \file complement.hpp
  \brief Inverter relocation across MUX/XOR structures
*/

#pragma once

#include "../aig.hpp"

#include <random>
#include <vector>

namespace aigopt
{

/*! \brief Moves the output inversion of MUX-shaped structures onto their data inputs.
 *
 * A site is a node n = !(s & a) & !(!s & b) whose two inner ANDs are used
 * only by n; it computes !mux(s, a, b) and is rebuilt as
 * mux(s, !a, !b) = !( !(s & !a) & !(!s & !b) ).  XOR and XNOR are the special
 * case b = !a.  Each site is flipped with probability 1/2 under `seed`; the
 * node count never changes.  Graphs without complemented AND inputs have no
 * sites and come back unchanged.
 */
inline Aig complement_pushdown( Aig const& aig, uint64_t seed = 0 )
{
  std::mt19937_64 rng( seed );
  auto refs = fanout_counts( aig );

  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  std::vector<Edge> map( aig.num_nodes() );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    map[aig.pi_node( i )] = pis[i];
  auto mapped = [&]( Edge e ) { return map[e.node()] ^ e.complemented(); };

  aig.foreach_and( [&]( node_id n ) {
    Edge p = aig.fanin0( n ), q = aig.fanin1( n );
    map[n] = b.create_and( mapped( p ), mapped( q ) );
    if ( !p.complemented() || !q.complemented() || !aig.is_and( p.node() ) || !aig.is_and( q.node() ) )
      return;
    if ( refs[p.node()] != 1 || refs[q.node()] != 1 )
      return;
    Edge pf[2] = { aig.fanin0( p.node() ), aig.fanin1( p.node() ) };
    Edge qf[2] = { aig.fanin0( q.node() ), aig.fanin1( q.node() ) };
    for ( int i = 0; i < 2; ++i )
    {
      for ( int j = 0; j < 2; ++j )
      {
        if ( pf[i] != !qf[j] )
          continue;
        if ( ( rng() & 1u ) == 0 )
          return;
        Edge s = mapped( pf[i] ), a = mapped( pf[1 - i] ), c = mapped( qf[1 - j] );
        map[n] = !b.create_and( !b.create_and( s, !a ), !b.create_and( !s, !c ) );
        return;
      }
    }
  } );

  for ( auto po : aig.pos() )
    b.create_po( map[po.node()] ^ po.complemented() );
  return b.build( aig.name() );
}

} // namespace aigopt
