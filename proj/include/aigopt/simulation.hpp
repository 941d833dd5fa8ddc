/*!
  \file simulation.hpp
  \brief Bit-parallel simulation of AIGs
*/

#pragma once

#include "aig.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace aigopt
{

/*! \brief Column-major bit matrix: one bit vector per signal, one bit per pattern. */
struct PatternMatrix
{
  uint64_t num_patterns{ 0 };
  std::vector<std::vector<uint64_t>> columns;

  PatternMatrix() = default;
  PatternMatrix( uint32_t width, uint64_t patterns )
      : num_patterns( patterns ), columns( width, std::vector<uint64_t>( words_for( patterns ), 0 ) )
  {
  }

  static uint64_t words_for( uint64_t patterns ) { return ( patterns + 63 ) / 64; }

  uint32_t width() const { return static_cast<uint32_t>( columns.size() ); }
  bool get( uint32_t column, uint64_t pattern ) const { return ( columns[column][pattern >> 6] >> ( pattern & 63 ) ) & 1u; }
  void set( uint32_t column, uint64_t pattern, bool value )
  {
    uint64_t mask = uint64_t( 1 ) << ( pattern & 63 );
    if ( value )
      columns[column][pattern >> 6] |= mask;
    else
      columns[column][pattern >> 6] &= ~mask;
  }
};

namespace detail
{

inline constexpr uint64_t var_masks[6] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                           0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

/*! \brief Word `w` of the exhaustive pattern column of variable `var` (pattern index bit `var`). */
inline uint64_t exhaustive_word( uint32_t var, uint64_t w )
{
  if ( var < 6 )
  {
    return var_masks[var];
  }
  return ( ( w >> ( var - 6 ) ) & 1u ) ? ~uint64_t( 0 ) : 0;
}

/*! \brief Simulates `words` words per node given PI words; returns node-major values. */
class block_simulator
{
public:
  explicit block_simulator( Aig const& aig, uint64_t words ) : aig_( aig ), words_( words ), values_( aig.num_nodes() * words, 0 ) {}

  uint64_t* node( node_id n ) { return values_.data() + n * words_; }
  uint64_t const* node( node_id n ) const { return values_.data() + n * words_; }

  void run()
  {
    aig_.foreach_and( [&]( node_id n ) {
      Edge a = aig_.fanin0( n ), b = aig_.fanin1( n );
      uint64_t const* va = node( a.node() );
      uint64_t const* vb = node( b.node() );
      uint64_t ma = a.complemented() ? ~uint64_t( 0 ) : 0;
      uint64_t mb = b.complemented() ? ~uint64_t( 0 ) : 0;
      uint64_t* out = node( n );
      for ( uint64_t w = 0; w < words_; ++w )
      {
        out[w] = ( va[w] ^ ma ) & ( vb[w] ^ mb );
      }
    } );
  }

  uint64_t po_word( uint32_t po, uint64_t w ) const
  {
    Edge e = aig_.po( po );
    return node( e.node() )[w] ^ ( e.complemented() ? ~uint64_t( 0 ) : 0 );
  }

private:
  Aig const& aig_;
  uint64_t words_;
  std::vector<uint64_t> values_;
};

} // namespace detail

/*! \brief Evaluates every PO on every pattern; `patterns.width()` must equal the PI count. */
inline PatternMatrix simulate( Aig const& aig, PatternMatrix const& patterns )
{
  if ( patterns.width() != aig.num_pis() )
  {
    throw std::invalid_argument( "pattern width " + std::to_string( patterns.width() ) + " does not match PI count " +
                                 std::to_string( aig.num_pis() ) );
  }
  uint64_t const total_words = PatternMatrix::words_for( patterns.num_patterns );
  uint64_t const block = 256;
  PatternMatrix result( aig.num_pos(), patterns.num_patterns );
  detail::block_simulator sim( aig, block );
  for ( uint64_t base = 0; base < total_words; base += block )
  {
    uint64_t words = std::min( block, total_words - base );
    for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    {
      uint64_t* dst = sim.node( aig.pi_node( i ) );
      for ( uint64_t w = 0; w < words; ++w )
      {
        dst[w] = patterns.columns[i][base + w];
      }
    }
    sim.run();
    for ( uint32_t o = 0; o < aig.num_pos(); ++o )
    {
      for ( uint64_t w = 0; w < words; ++w )
      {
        result.columns[o][base + w] = sim.po_word( o, w );
      }
    }
  }
  // clear bits beyond num_patterns so equal functions compare equal
  if ( uint64_t tail = patterns.num_patterns & 63; tail != 0 )
  {
    for ( auto& col : result.columns )
    {
      col.back() &= ( uint64_t( 1 ) << tail ) - 1;
    }
  }
  return result;
}

/*! \brief All 2^n assignments; pattern p assigns bit i of p to PI i. */
inline PatternMatrix exhaustive_patterns( uint32_t num_pis )
{
  if ( num_pis > 24 )
  {
    throw std::invalid_argument( "exhaustive patterns limited to 24 inputs" );
  }
  PatternMatrix m( num_pis, uint64_t( 1 ) << num_pis );
  for ( uint32_t i = 0; i < num_pis; ++i )
  {
    for ( uint64_t w = 0; w < m.columns[i].size(); ++w )
    {
      m.columns[i][w] = detail::exhaustive_word( i, w );
    }
    if ( num_pis < 6 )
    {
      m.columns[i][0] &= ( uint64_t( 1 ) << ( uint64_t( 1 ) << num_pis ) ) - 1;
    }
  }
  return m;
}

inline PatternMatrix random_patterns( uint32_t num_pis, uint64_t count, uint64_t seed )
{
  PatternMatrix m( num_pis, count );
  std::mt19937_64 rng( seed );
  for ( auto& col : m.columns )
  {
    for ( auto& w : col )
    {
      w = rng();
    }
    if ( uint64_t tail = count & 63; tail != 0 )
    {
      col.back() &= ( uint64_t( 1 ) << tail ) - 1;
    }
  }
  return m;
}

} // namespace aigopt
