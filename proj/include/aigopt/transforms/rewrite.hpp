/*!
  \file rewrite.hpp
  \brief Four-input cut rewriting with the NPN structure table
*/

#pragma once

#include "../aig.hpp"
#include "../cuts.hpp"
#include "../npn.hpp"
#include "../synthesis.hpp"
#include "accounting.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace aigopt
{

struct RewriteParams
{
  /*! \brief Accept replacements that keep the node count unchanged (taken with probability 1/2).
   *
   * In this mode each candidate also binds the cut leaves to the structure
   * through a randomly drawn symmetry of its NPN class.
   */
  bool allow_zero_gain{ false };
  uint32_t cut_limit{ 8 };
};

/*! \brief Replaces 4-input cuts by the precomputed structure of their NPN class when that saves nodes.
 *
 * The new graph is built in topological order with live-node reference
 * counts.  For each node the original two-input AND and one candidate per cut
 * of three or four leaves are built, and each is priced by the number of
 * nodes it keeps alive.  Gain is the price of the original AND minus the
 * price of the candidate; the best gain wins and ties go to the lowest NPN
 * class index.  The result never has more AND nodes than the input.
 */
inline Aig rewrite( Aig const& aig, RewriteParams const& ps = {}, uint64_t seed = 0 )
{
  auto const& npn = NpnTable::instance();
  auto const& table = StructureTable::instance();
  std::mt19937_64 rng( seed );
  auto cuts = enumerate_cuts( aig, CutParams{ 4, ps.cut_limit } );
  auto refs = fanout_counts( aig );

  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  detail::live_tracker live( b );
  std::vector<Edge> map( aig.num_nodes() );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    map[aig.pi_node( i )] = pis[i];
  auto image = [&]( Edge e ) { return map[e.node()] ^ e.complemented(); };

  std::array<Edge, 4> inputs;
  aig.foreach_and( [&]( node_id n ) {
    Edge i0 = image( aig.fanin0( n ) ), i1 = image( aig.fanin1( n ) );
    live.deref( i0 );
    live.deref( i1 );
    Edge fallback = b.create_and( i0, i1 );
    int base = static_cast<int>( live.revival_cost( fallback ) );

    int best_gain = std::numeric_limits<int>::min();
    uint32_t best_class = ~0u;
    Edge best{};
    for ( auto const& cut : cuts[n] )
    {
      if ( cut.size < 3 )
        continue;
      uint32_t cls = npn.class_of( cut.function );
      NpnTransform t = npn.transform( cut.function );
      if ( ps.allow_zero_gain )
      {
        auto const& autos = npn.automorphisms( cls );
        t = compose( t, autos[rng() % autos.size()] );
      }
      for ( uint32_t j = 0; j < 4; ++j )
      {
        Edge leaf = t.perm[j] < cut.size ? map[cut.leaves[t.perm[j]]] : Edge::constant( false );
        inputs[j] = leaf ^ ( ( ( t.input_neg >> j ) & 1u ) != 0 );
      }
      Edge candidate = instantiate( b, table.structure( cls ), inputs ) ^ t.output_neg;
      if ( candidate == fallback )
        continue;
      int gain = base - static_cast<int>( live.revival_cost( candidate ) );
      if ( gain > best_gain || ( gain == best_gain && cls < best_class ) )
      {
        best_gain = gain;
        best_class = cls;
        best = candidate;
      }
    }

    bool take = best_gain > 0 || ( best_gain == 0 && ps.allow_zero_gain && ( rng() & 1u ) );
    map[n] = take ? best : fallback;
    for ( uint32_t r = 0; r < refs[n]; ++r )
      live.ref( map[n] );
  } );

  for ( auto po : aig.pos() )
    b.create_po( image( po ) );
  Aig result = b.build( aig.name() );
  if ( result.num_ands() > aig.num_ands() )
    return aig;
  return result;
}

} // namespace aigopt
