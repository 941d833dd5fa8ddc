/*!
  \file fixtures.hpp
  \brief Generators for the bundled benchmark circuits
*/

#pragma once

#include "aig.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace aigopt
{

namespace detail
{

/* two-level XOR, without the AND(a,b) term a majority gate could share */
inline Edge sop_xor( AigBuilder& b, Edge x, Edge y )
{
  return b.create_or( b.create_and( x, !y ), b.create_and( !x, y ) );
}

/* full adder in unoptimized sum-of-products form */
inline std::pair<Edge, Edge> full_adder( AigBuilder& b, Edge x, Edge y, Edge c )
{
  Edge sum = sop_xor( b, sop_xor( b, x, y ), c );
  Edge carry = b.create_or( b.create_or( b.create_and( x, y ), b.create_and( x, c ) ), b.create_and( y, c ) );
  return { sum, carry };
}

/* ripple-carry sum of two little-endian words; result is one bit wider */
inline std::vector<Edge> ripple_add( AigBuilder& b, std::vector<Edge> x, std::vector<Edge> y )
{
  size_t w = std::max( x.size(), y.size() );
  x.resize( w, Edge::constant( false ) );
  y.resize( w, Edge::constant( false ) );
  std::vector<Edge> out;
  Edge carry = Edge::constant( false );
  for ( size_t i = 0; i < w; ++i )
  {
    auto [s, c] = full_adder( b, x[i], y[i], carry );
    out.push_back( s );
    carry = c;
  }
  out.push_back( carry );
  return out;
}

} // namespace detail

/*! \brief Product bits 5..10 of an 8x8 array multiplier (16 PIs, 6 POs). */
inline Aig make_multiplier_slice()
{
  AigBuilder b;
  std::vector<Edge> x, y;
  for ( int i = 0; i < 8; ++i )
    x.push_back( b.create_pi() );
  for ( int i = 0; i < 8; ++i )
    y.push_back( b.create_pi() );

  // accumulate shifted partial-product rows with ripple adders
  std::vector<Edge> product;
  for ( int j = 0; j < 8; ++j )
  {
    std::vector<Edge> row( j, Edge::constant( false ) );
    for ( int i = 0; i < 8; ++i )
      row.push_back( b.create_and( x[i], y[j] ) );
    product = j == 0 ? row : detail::ripple_add( b, product, row );
    product.resize( 16, Edge::constant( false ) );
  }
  for ( int k = 5; k <= 10; ++k )
    b.create_po( product[k] );
  return b.build( "mult_slice" );
}

/*! \brief Sum of six 3-bit operands as a balanced tree of ripple adders (18 PIs, 6 POs). */
inline Aig make_adder_tree()
{
  AigBuilder b;
  std::vector<std::vector<Edge>> ops( 6 );
  for ( auto& op : ops )
    for ( int i = 0; i < 3; ++i )
      op.push_back( b.create_pi() );
  auto s01 = detail::ripple_add( b, ops[0], ops[1] );
  auto s23 = detail::ripple_add( b, ops[2], ops[3] );
  auto s45 = detail::ripple_add( b, ops[4], ops[5] );
  auto total = detail::ripple_add( b, detail::ripple_add( b, s01, s23 ), s45 );
  for ( int k = 0; k < 6; ++k )
    b.create_po( total[k] );
  return b.build( "adder_tree" );
}

/*! \brief Index of the highest asserted request plus a valid flag (16 PIs, 5 POs). */
inline Aig make_priority_encoder()
{
  AigBuilder b;
  std::vector<Edge> r;
  for ( int i = 0; i < 16; ++i )
    r.push_back( b.create_pi() );
  std::vector<Edge> grant( 16 );
  Edge none_above = Edge::constant( true );
  for ( int i = 15; i >= 0; --i )
  {
    grant[i] = b.create_and( r[i], none_above );
    none_above = b.create_and( none_above, !r[i] );
  }
  for ( int bit = 0; bit < 4; ++bit )
  {
    Edge acc = Edge::constant( false );
    for ( int i = 0; i < 16; ++i )
      if ( ( i >> bit ) & 1 )
        acc = b.create_or( acc, grant[i] );
    b.create_po( acc );
  }
  b.create_po( !none_above );
  return b.build( "priority_enc" );
}

/*! \brief Seeded random AND/OR/XOR/MUX logic over a sliding signal window (16 PIs, 7 POs). */
inline Aig make_random_cone( uint64_t seed = 2024, uint32_t operations = 520 )
{
  std::mt19937_64 rng( seed );
  AigBuilder b;
  std::vector<Edge> sig;
  for ( int i = 0; i < 16; ++i )
    sig.push_back( b.create_pi() );
  constexpr uint32_t window = 40;
  for ( uint32_t i = 0; i < operations; ++i )
  {
    uint32_t lo = sig.size() > window ? static_cast<uint32_t>( sig.size() ) - window : 0;
    std::uniform_int_distribution<uint32_t> pick( lo, static_cast<uint32_t>( sig.size() ) - 1 );
    auto operand = [&] { return sig[pick( rng )] ^ ( ( rng() & 3u ) == 0 ); };
    Edge x = operand(), y = operand();
    Edge out;
    switch ( rng() % 4 )
    {
    case 0: out = b.create_and( x, y ); break;
    case 1: out = b.create_or( x, y ); break;
    case 2: out = b.create_xor( x, y ); break;
    default: out = b.create_mux( operand(), x, y ); break;
    }
    sig.push_back( out );
  }
  for ( uint32_t i = 0; i < 7; ++i )
    b.create_po( sig[sig.size() - 1 - 3 * i] );
  return b.build( "random_cone" );
}

/*! \brief The four bundled designs in a fixed order. */
inline std::vector<Aig> bundled_designs()
{
  return { make_multiplier_slice(), make_adder_tree(), make_priority_encoder(), make_random_cone() };
}

} // namespace aigopt
