/*!
  \file truth_table.hpp
  \brief Small truth tables: 16-bit four-variable tables and a dynamic table up to 16 variables
*/

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aigopt
{

namespace tt4
{

inline constexpr uint16_t var_mask[4] = { 0xaaaa, 0xcccc, 0xf0f0, 0xff00 };

constexpr uint16_t nth_var( uint32_t var ) { return var_mask[var]; }

constexpr uint16_t cofactor0( uint16_t f, uint32_t var )
{
  uint16_t t = f & static_cast<uint16_t>( ~var_mask[var] );
  return static_cast<uint16_t>( t | ( t << ( 1u << var ) ) );
}

constexpr uint16_t cofactor1( uint16_t f, uint32_t var )
{
  uint16_t t = f & var_mask[var];
  return static_cast<uint16_t>( t | ( t >> ( 1u << var ) ) );
}

constexpr bool has_var( uint16_t f, uint32_t var ) { return cofactor0( f, var ) != cofactor1( f, var ); }

constexpr uint32_t support( uint16_t f )
{
  uint32_t s = 0;
  for ( uint32_t v = 0; v < 4; ++v )
  {
    if ( has_var( f, v ) )
      s |= 1u << v;
  }
  return s;
}

/*! \brief Widens a table over `k` variables (bits 0..2^k-1 valid) to 16 bits. */
constexpr uint16_t extend( uint32_t f, uint32_t k )
{
  if ( k >= 4 )
    return static_cast<uint16_t>( f & 0xffffu );
  uint32_t bits = 1u << k;
  uint32_t t = f & ( ( 1u << bits ) - 1u );
  for ( uint32_t b = bits; b < 16; b <<= 1 )
  {
    t |= t << b;
  }
  return static_cast<uint16_t>( t & 0xffffu );
}

/*! \brief Reorders variables: variable `i` of `f` becomes variable `pos[i]` of the result. */
inline uint16_t remap( uint16_t f, uint32_t k, uint8_t const* pos )
{
  uint16_t r = 0;
  for ( uint32_t x = 0; x < 16; ++x )
  {
    uint32_t src = 0;
    for ( uint32_t i = 0; i < k; ++i )
    {
      src |= ( ( x >> pos[i] ) & 1u ) << i;
    }
    if ( ( f >> src ) & 1u )
      r |= static_cast<uint16_t>( 1u << x );
  }
  return r;
}

/*! \brief Projects a 16-bit table onto its support, returning the compact table and variable count. */
inline uint16_t shrink_to_support( uint16_t f, uint32_t support_mask, uint32_t& k )
{
  uint8_t vars[4];
  k = 0;
  for ( uint32_t v = 0; v < 4; ++v )
  {
    if ( support_mask & ( 1u << v ) )
      vars[k++] = static_cast<uint8_t>( v );
  }
  uint16_t r = 0;
  for ( uint32_t x = 0; x < ( 1u << k ); ++x )
  {
    uint32_t src = 0;
    for ( uint32_t i = 0; i < k; ++i )
    {
      src |= ( ( x >> i ) & 1u ) << vars[i];
    }
    if ( ( f >> src ) & 1u )
      r |= static_cast<uint16_t>( 1u << x );
  }
  return extend( r, k );
}

} // namespace tt4

/*! \brief Truth table over up to 16 variables stored as 64-bit words. */
class TruthTable
{
public:
  TruthTable() : TruthTable( 0 ) {}
  explicit TruthTable( uint32_t num_vars )
      : num_vars_( num_vars ), words_( num_vars <= 6 ? 1u : ( 1u << ( num_vars - 6 ) ), 0 )
  {
    if ( num_vars > 16 )
    {
      throw std::invalid_argument( "truth tables are limited to 16 variables" );
    }
  }

  static TruthTable nth_var( uint32_t num_vars, uint32_t var )
  {
    static constexpr uint64_t masks[6] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                           0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
    TruthTable t( num_vars );
    for ( size_t w = 0; w < t.words_.size(); ++w )
    {
      t.words_[w] = var < 6 ? masks[var] : ( ( ( w >> ( var - 6 ) ) & 1u ) ? ~uint64_t( 0 ) : 0 );
    }
    t.mask();
    return t;
  }

  static TruthTable constant( uint32_t num_vars, bool value )
  {
    TruthTable t( num_vars );
    if ( value )
    {
      for ( auto& w : t.words_ )
        w = ~uint64_t( 0 );
      t.mask();
    }
    return t;
  }

  uint32_t num_vars() const { return num_vars_; }
  uint64_t num_bits() const { return uint64_t( 1 ) << num_vars_; }
  std::vector<uint64_t> const& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }

  bool get_bit( uint64_t i ) const { return ( words_[i >> 6] >> ( i & 63 ) ) & 1u; }
  void set_bit( uint64_t i ) { words_[i >> 6] |= uint64_t( 1 ) << ( i & 63 ); }

  bool is_const0() const
  {
    for ( auto w : words_ )
      if ( w )
        return false;
    return true;
  }
  bool is_const1() const { return ( ~*this ).is_const0(); }

  TruthTable operator~() const
  {
    TruthTable t( *this );
    for ( auto& w : t.words_ )
      w = ~w;
    t.mask();
    return t;
  }
  TruthTable operator&( TruthTable const& o ) const { return binary( o, []( uint64_t a, uint64_t b ) { return a & b; } ); }
  TruthTable operator|( TruthTable const& o ) const { return binary( o, []( uint64_t a, uint64_t b ) { return a | b; } ); }
  TruthTable operator^( TruthTable const& o ) const { return binary( o, []( uint64_t a, uint64_t b ) { return a ^ b; } ); }
  bool operator==( TruthTable const& o ) const { return num_vars_ == o.num_vars_ && words_ == o.words_; }

  TruthTable cofactor0( uint32_t var ) const { return cofactor( var, false ); }
  TruthTable cofactor1( uint32_t var ) const { return cofactor( var, true ); }
  bool has_var( uint32_t var ) const { return cofactor0( var ) != cofactor1( var ); }

  uint32_t support_size() const
  {
    uint32_t s = 0;
    for ( uint32_t v = 0; v < num_vars_; ++v )
      s += has_var( v ) ? 1u : 0u;
    return s;
  }

  size_t hash() const
  {
    uint64_t h = 0xcbf29ce484222325ull ^ num_vars_;
    for ( auto w : words_ )
    {
      h ^= w;
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return static_cast<size_t>( h );
  }

private:
  void mask()
  {
    if ( num_vars_ < 6 )
    {
      words_[0] &= ( uint64_t( 1 ) << ( 1u << num_vars_ ) ) - 1;
    }
  }

  template<typename Op>
  TruthTable binary( TruthTable const& o, Op op ) const
  {
    TruthTable t( num_vars_ );
    for ( size_t w = 0; w < words_.size(); ++w )
      t.words_[w] = op( words_[w], o.words_[w] );
    return t;
  }

  TruthTable cofactor( uint32_t var, bool positive ) const
  {
    static constexpr uint64_t masks[6] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                           0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
    TruthTable t( *this );
    if ( var < 6 )
    {
      uint32_t shift = 1u << var;
      for ( auto& w : t.words_ )
      {
        uint64_t keep = positive ? ( w & masks[var] ) : ( w & ~masks[var] );
        w = positive ? ( keep | ( keep >> shift ) ) : ( keep | ( keep << shift ) );
      }
      t.mask();
    }
    else
    {
      size_t step = size_t( 1 ) << ( var - 6 );
      for ( size_t i = 0; i < t.words_.size(); i += 2 * step )
      {
        for ( size_t j = 0; j < step; ++j )
        {
          uint64_t v = positive ? t.words_[i + step + j] : t.words_[i + j];
          t.words_[i + j] = v;
          t.words_[i + step + j] = v;
        }
      }
    }
    return t;
  }

  uint32_t num_vars_;
  std::vector<uint64_t> words_;
};

struct TruthTableHash
{
  size_t operator()( TruthTable const& t ) const { return t.hash(); }
};

} // namespace aigopt
