/*!
  \file equivalence.hpp
  \brief Simulation-based combinational equivalence checking
*/

#pragma once

#include "aig.hpp"
#include "simulation.hpp"

#include <bit>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace aigopt
{

/*! \brief Largest PI count checked exhaustively; wider designs use random patterns. */
inline constexpr uint32_t exhaustive_pi_limit = 20;
inline constexpr uint64_t random_check_patterns = 10000;

enum class equivalence_status
{
  exact_equivalent,
  probabilistic_pass,
  fail
};

struct EquivalenceVerdict
{
  equivalence_status status{ equivalence_status::fail };
  /*! \brief Distinguishing PI assignment when `status == fail`. */
  std::vector<bool> counterexample;
  uint32_t failing_po{ 0 };

  bool equivalent() const { return status != equivalence_status::fail; }
};

namespace detail
{

inline std::vector<bool> pattern_bits( std::vector<std::vector<uint64_t>> const& pi_words, uint64_t w, uint32_t bit )
{
  std::vector<bool> cex( pi_words.size() );
  for ( size_t i = 0; i < pi_words.size(); ++i )
  {
    cex[i] = ( pi_words[i][w] >> bit ) & 1u;
  }
  return cex;
}

} // namespace detail

/*! \brief Compares the PO functions of `a` and `b` over all (or 10,000 seeded random) input patterns. */
inline EquivalenceVerdict check_equivalence( Aig const& a, Aig const& b, uint64_t seed = 0x5eed )
{
  if ( a.num_pis() != b.num_pis() || a.num_pos() != b.num_pos() )
  {
    throw std::invalid_argument( "equivalence check needs matching PI and PO counts" );
  }
  uint32_t const n = a.num_pis();
  bool const exhaustive = n <= exhaustive_pi_limit;
  uint64_t const total_patterns = exhaustive ? ( uint64_t( 1 ) << n ) : random_check_patterns;
  uint64_t const total_words = PatternMatrix::words_for( total_patterns );
  uint64_t const block = std::min<uint64_t>( 64, total_words );
  uint64_t const tail_mask = ( total_patterns & 63 ) ? ( ( uint64_t( 1 ) << ( total_patterns & 63 ) ) - 1 ) : ~uint64_t( 0 );

  detail::block_simulator sa( a, block ), sb( b, block );
  std::mt19937_64 rng( seed );
  std::vector<std::vector<uint64_t>> pi_words( n, std::vector<uint64_t>( block ) );

  for ( uint64_t base = 0; base < total_words; base += block )
  {
    uint64_t words = std::min( block, total_words - base );
    for ( uint32_t i = 0; i < n; ++i )
    {
      for ( uint64_t w = 0; w < words; ++w )
      {
        pi_words[i][w] = exhaustive ? detail::exhaustive_word( i, base + w ) : rng();
      }
      std::copy_n( pi_words[i].begin(), words, sa.node( a.pi_node( i ) ) );
      std::copy_n( pi_words[i].begin(), words, sb.node( b.pi_node( i ) ) );
    }
    sa.run();
    sb.run();
    for ( uint32_t o = 0; o < a.num_pos(); ++o )
    {
      for ( uint64_t w = 0; w < words; ++w )
      {
        uint64_t diff = sa.po_word( o, w ) ^ sb.po_word( o, w );
        if ( base + w + 1 == total_words )
        {
          diff &= tail_mask;
        }
        if ( diff != 0 )
        {
          EquivalenceVerdict v;
          v.status = equivalence_status::fail;
          v.failing_po = o;
          v.counterexample = detail::pattern_bits( pi_words, w, static_cast<uint32_t>( std::countr_zero( diff ) ) );
          return v;
        }
      }
    }
  }
  EquivalenceVerdict v;
  v.status = exhaustive ? equivalence_status::exact_equivalent : equivalence_status::probabilistic_pass;
  return v;
}

} // namespace aigopt
