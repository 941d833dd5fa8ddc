/*!
  \file cuts.hpp
  \brief k-feasible cut enumeration (k <= 4) with truth tables
*/

#pragma once

#include "aig.hpp"
#include "truth_table.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aigopt
{

/*! \brief A cut: sorted leaf ids and the root function over the leaves.
 *
 * Leaf `i` is variable `i` of `function`; the table is padded to 16 bits by
 * repetition, so it is independent of unused high variables.
 */
struct Cut
{
  std::array<node_id, 4> leaves{};
  uint8_t size{ 0 };
  uint16_t function{ 0 };
  float area_flow{ 0.0f };

  std::span<const node_id> leaf_span() const { return { leaves.data(), size }; }
  bool is_trivial_of( node_id n ) const { return size == 1 && leaves[0] == n; }

  uint64_t signature() const
  {
    uint64_t s = 0;
    for ( uint8_t i = 0; i < size; ++i )
      s |= uint64_t( 1 ) << ( leaves[i] & 63 );
    return s;
  }

  /*! \brief True if every leaf of this cut is also a leaf of `other`. */
  bool subset_of( Cut const& other ) const
  {
    uint8_t j = 0;
    for ( uint8_t i = 0; i < size; ++i )
    {
      while ( j < other.size && other.leaves[j] < leaves[i] )
        ++j;
      if ( j == other.size || other.leaves[j] != leaves[i] )
        return false;
      ++j;
    }
    return true;
  }
};

struct CutParams
{
  uint32_t cut_size{ 4 };
  uint32_t cut_limit{ 8 };
};

using CutSets = std::vector<std::vector<Cut>>;

namespace detail
{

inline bool merge_leaves( Cut const& a, Cut const& b, uint32_t k, Cut& out )
{
  uint8_t i = 0, j = 0, n = 0;
  while ( i < a.size || j < b.size )
  {
    node_id next;
    if ( j == b.size || ( i < a.size && a.leaves[i] < b.leaves[j] ) )
      next = a.leaves[i++];
    else if ( i == a.size || b.leaves[j] < a.leaves[i] )
      next = b.leaves[j++];
    else
    {
      next = a.leaves[i++];
      ++j;
    }
    if ( n == k )
      return false;
    out.leaves[n++] = next;
  }
  out.size = n;
  return true;
}

/*! \brief Re-expresses `c.function` over the leaf set of `target`. */
inline uint16_t expand_function( Cut const& c, Cut const& target )
{
  uint8_t pos[4];
  uint8_t j = 0;
  for ( uint8_t i = 0; i < c.size; ++i )
  {
    while ( target.leaves[j] != c.leaves[i] )
      ++j;
    pos[i] = j;
  }
  bool identity = true;
  for ( uint8_t i = 0; i < c.size; ++i )
    identity = identity && pos[i] == i;
  if ( identity )
    return c.function;
  return tt4::remap( c.function, c.size, pos );
}

} // namespace detail

/*! \brief Enumerates k-feasible cuts bottom-up.
 *
 * Every PI and AND node gets its trivial cut first, followed by at most
 * `cut_limit` non-trivial cuts ranked by leaf count, then area flow, then
 * leaf ids.  Dominated cuts (strict leaf supersets of another cut) are dropped.
 */
inline CutSets enumerate_cuts( Aig const& aig, CutParams const& ps = {} )
{
  if ( ps.cut_size < 2 || ps.cut_size > 4 )
  {
    throw std::invalid_argument( "cut size must be 2, 3 or 4" );
  }
  auto refs = fanout_counts( aig );
  std::vector<float> node_flow( aig.num_nodes(), 0.0f );
  CutSets cuts( aig.num_nodes() );

  auto trivial = []( node_id n ) {
    Cut c;
    c.leaves[0] = n;
    c.size = 1;
    c.function = tt4::nth_var( 0 );
    return c;
  };
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    cuts[aig.pi_node( i )].push_back( trivial( aig.pi_node( i ) ) );
  }

  std::vector<Cut> candidates;
  aig.foreach_and( [&]( node_id n ) {
    Edge e0 = aig.fanin0( n ), e1 = aig.fanin1( n );
    auto const& cs0 = cuts[e0.node()];
    auto const& cs1 = cuts[e1.node()];
    candidates.clear();
    for ( auto const& c0 : cs0 )
    {
      for ( auto const& c1 : cs1 )
      {
        Cut m;
        if ( !detail::merge_leaves( c0, c1, ps.cut_size, m ) )
          continue;
        uint16_t t0 = detail::expand_function( c0, m ) ^ ( e0.complemented() ? 0xffff : 0 );
        uint16_t t1 = detail::expand_function( c1, m ) ^ ( e1.complemented() ? 0xffff : 0 );
        m.function = static_cast<uint16_t>( t0 & t1 );
        float flow = 1.0f;
        for ( uint8_t i = 0; i < m.size; ++i )
          flow += node_flow[m.leaves[i]];
        m.area_flow = flow;
        candidates.push_back( m );
      }
    }
    std::sort( candidates.begin(), candidates.end(), []( Cut const& a, Cut const& b ) {
      if ( a.size != b.size )
        return a.size < b.size;
      if ( a.area_flow != b.area_flow )
        return a.area_flow < b.area_flow;
      return std::lexicographical_compare( a.leaves.begin(), a.leaves.begin() + a.size, b.leaves.begin(), b.leaves.begin() + b.size );
    } );
    auto& out = cuts[n];
    out.push_back( trivial( n ) );
    for ( auto const& c : candidates )
    {
      if ( out.size() > ps.cut_limit )
        break;
      bool dominated = false;
      for ( size_t i = 1; i < out.size() && !dominated; ++i )
      {
        dominated = out[i].subset_of( c );
      }
      if ( !dominated )
        out.push_back( c );
    }
    float best = out.size() > 1 ? out[1].area_flow : 1.0f;
    for ( size_t i = 1; i < out.size(); ++i )
      best = std::min( best, out[i].area_flow );
    node_flow[n] = best / static_cast<float>( std::max<uint32_t>( 1, refs[n] ) );
  } );
  return cuts;
}

} // namespace aigopt
