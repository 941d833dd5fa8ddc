/*!
  \file npn.hpp
  \brief NPN classification of all 65,536 four-input functions
*/

#pragma once

#include "truth_table.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace aigopt
{

/*! \brief Maps a class representative onto a member function.
 *
 * member(x) = output_neg XOR rep(y) where y_j = x_{perm[j]} XOR bit j of input_neg.
 */
struct NpnTransform
{
  std::array<uint8_t, 4> perm{ 0, 1, 2, 3 };
  uint8_t input_neg{ 0 };
  bool output_neg{ false };
};

inline uint16_t apply_npn( uint16_t rep, NpnTransform const& t )
{
  uint16_t g = 0;
  for ( uint32_t x = 0; x < 16; ++x )
  {
    uint32_t y = 0;
    for ( uint32_t j = 0; j < 4; ++j )
    {
      y |= ( ( ( x >> t.perm[j] ) & 1u ) ^ ( ( t.input_neg >> j ) & 1u ) ) << j;
    }
    bool bit = ( ( rep >> y ) & 1u ) != 0;
    if ( bit != t.output_neg )
      g |= static_cast<uint16_t>( 1u << x );
  }
  return g;
}

/*! \brief Class index and transform for every four-input function.
 *
 * Classes are numbered in increasing order of their representative, which is
 * the numerically smallest member of the class.  Built once on first use.
 */
class NpnTable
{
public:
  static NpnTable const& instance()
  {
    static NpnTable const table;
    return table;
  }

  uint32_t num_classes() const { return static_cast<uint32_t>( representatives_.size() ); }
  uint16_t class_of( uint16_t f ) const { return class_of_[f]; }
  uint16_t representative( uint32_t cls ) const { return representatives_[cls]; }
  NpnTransform const& transform( uint16_t f ) const { return transform_[f]; }

  /*! \brief Transforms that map the class representative onto itself (identity first). */
  std::vector<NpnTransform> const& automorphisms( uint32_t cls ) const { return automorphisms_[cls]; }

private:
  NpnTable() : class_of_( 65536, 0xffff ), transform_( 65536 )
  {
    std::vector<NpnTransform> all;
    std::array<uint8_t, 4> perm{ 0, 1, 2, 3 };
    do
    {
      for ( uint8_t neg = 0; neg < 16; ++neg )
      {
        for ( bool out : { false, true } )
        {
          all.push_back( NpnTransform{ perm, neg, out } );
        }
      }
    } while ( std::next_permutation( perm.begin(), perm.end() ) );

    for ( uint32_t f = 0; f < 65536; ++f )
    {
      if ( class_of_[f] != 0xffff )
        continue;
      uint16_t cls = static_cast<uint16_t>( representatives_.size() );
      representatives_.push_back( static_cast<uint16_t>( f ) );
      automorphisms_.emplace_back();
      for ( auto const& t : all )
      {
        uint16_t g = apply_npn( static_cast<uint16_t>( f ), t );
        if ( g == f )
          automorphisms_.back().push_back( t );
        if ( class_of_[g] == 0xffff )
        {
          class_of_[g] = cls;
          transform_[g] = t;
        }
      }
    }
  }

  std::vector<uint16_t> class_of_;
  std::vector<NpnTransform> transform_;
  std::vector<uint16_t> representatives_;
  std::vector<std::vector<NpnTransform>> automorphisms_;
};

/*! \brief Transform equal to applying automorphism `s` of the representative before `t`. */
inline NpnTransform compose( NpnTransform const& t, NpnTransform const& s )
{
  NpnTransform r;
  for ( uint32_t j = 0; j < 4; ++j )
  {
    r.perm[j] = t.perm[s.perm[j]];
    r.input_neg |= static_cast<uint8_t>( ( ( ( t.input_neg >> s.perm[j] ) ^ ( s.input_neg >> j ) ) & 1u ) << j );
  }
  r.output_neg = t.output_neg != s.output_neg;
  return r;
}

} // namespace aigopt
