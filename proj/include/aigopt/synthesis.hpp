/*!
  \file synthesis.hpp
  \brief Truth-table to AIG synthesis: a per-NPN-class structure table for four
         inputs and greedy Shannon decomposition for larger cones
*/

#pragma once

#include "aig.hpp"
#include "npn.hpp"
#include "truth_table.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace aigopt
{

namespace detail
{

/* Minimum-cost decomposition search over all four-input functions.  Costs
 * count AND nodes of a tree realisation (shared sub-functions are merged
 * again by structural hashing when the structure is built). */
class decomposition_search
{
public:
  enum class kind : uint8_t
  {
    constant,
    literal,
    and_var,   // f = l & g, l a literal on `var`
    xor_var,   // f = x_var ^ g
    mux,       // f = var ? f1 : f0
    mono,      // f = g | (l & h), g implies h, l a literal on `var`
    bi_and,    // f = g(A) & h(B)
    bi_xor     // f = g(A) ^ h(B)
  };

  struct choice
  {
    kind k{ kind::constant };
    uint8_t var{ 0 };
    uint8_t set_a{ 0 };
    bool var_neg{ false };
    bool out_neg{ false };
    uint16_t g{ 0 };
    uint16_t h{ 0 };
  };

  decomposition_search() : cost_( 65536, -1 ), choice_( 65536 ) {}

  int cost( uint16_t f )
  {
    if ( cost_[f] >= 0 )
      return cost_[f];
    choice best;
    int best_cost = solve( f, best );
    cost_[f] = static_cast<int16_t>( best_cost );
    choice_[f] = best;
    return best_cost;
  }

  choice const& decision( uint16_t f )
  {
    cost( f );
    return choice_[f];
  }

private:
  static uint16_t exists( uint16_t f, uint32_t vars )
  {
    for ( uint32_t v = 0; v < 4; ++v )
    {
      if ( vars & ( 1u << v ) )
        f = tt4::cofactor0( f, v ) | tt4::cofactor1( f, v );
    }
    return f;
  }

  int solve( uint16_t f, choice& best )
  {
    if ( f == 0 || f == 0xffff )
    {
      best.k = kind::constant;
      return 0;
    }
    for ( uint8_t v = 0; v < 4; ++v )
    {
      if ( f == tt4::nth_var( v ) || f == static_cast<uint16_t>( ~tt4::nth_var( v ) ) )
      {
        best.k = kind::literal;
        best.var = v;
        best.var_neg = f != tt4::nth_var( v );
        return 0;
      }
    }

    int best_cost = 1 << 14;
    auto consider = [&]( int c, choice const& ch ) {
      if ( c < best_cost )
      {
        best_cost = c;
        best = ch;
      }
    };

    uint32_t const supp = tt4::support( f );
    for ( uint8_t v = 0; v < 4; ++v )
    {
      if ( !( supp & ( 1u << v ) ) )
        continue;
      uint16_t f0 = tt4::cofactor0( f, v ), f1 = tt4::cofactor1( f, v );
      choice ch;
      ch.var = v;
      if ( f0 == 0 )
      {
        ch.k = kind::and_var; ch.var_neg = false; ch.out_neg = false; ch.g = f1;
        consider( 1 + cost( f1 ), ch );
      }
      else if ( f1 == 0 )
      {
        ch.k = kind::and_var; ch.var_neg = true; ch.out_neg = false; ch.g = f0;
        consider( 1 + cost( f0 ), ch );
      }
      else if ( f0 == 0xffff )
      {
        // f = !x | f1 = !(x & !f1)
        ch.k = kind::and_var; ch.var_neg = false; ch.out_neg = true; ch.g = static_cast<uint16_t>( ~f1 );
        consider( 1 + cost( ch.g ), ch );
      }
      else if ( f1 == 0xffff )
      {
        ch.k = kind::and_var; ch.var_neg = true; ch.out_neg = true; ch.g = static_cast<uint16_t>( ~f0 );
        consider( 1 + cost( ch.g ), ch );
      }
      else if ( f1 == static_cast<uint16_t>( ~f0 ) )
      {
        ch.k = kind::xor_var; ch.g = f0;
        consider( 3 + cost( f0 ), ch );
      }
      else if ( ( f0 & ~f1 & 0xffff ) == 0 || ( f1 & ~f0 & 0xffff ) == 0 )
      {
        bool up = ( f0 & ~f1 & 0xffff ) == 0;
        ch.k = kind::mono; ch.var_neg = !up; ch.g = up ? f0 : f1; ch.h = up ? f1 : f0;
        consider( 2 + cost( ch.g ) + cost( ch.h ), ch );
      }
      else
      {
        ch.k = kind::mux; ch.g = f0; ch.h = f1;
        consider( 3 + cost( f0 ) + cost( f1 ), ch );
      }
    }

    // bi-decomposition over disjoint support partitions
    for ( uint32_t a = 1; a < 16; ++a )
    {
      if ( ( a & supp ) != a || a == supp )
        continue;
      uint32_t b = supp & ~a;
      if ( a > b )
        continue; // each unordered partition once
      for ( bool neg : { false, true } )
      {
        uint16_t t = neg ? static_cast<uint16_t>( ~f ) : f;
        uint16_t g = exists( t, b ), h = exists( t, a );
        if ( static_cast<uint16_t>( g & h ) == t )
        {
          choice ch;
          ch.k = kind::bi_and; ch.set_a = static_cast<uint8_t>( a ); ch.out_neg = neg; ch.g = g; ch.h = h;
          consider( 1 + cost( g ) + cost( h ), ch );
        }
      }
      // xor: g = f restricted to B = 0, h = f ^ g must not depend on A
      uint16_t g = f;
      for ( uint32_t v = 0; v < 4; ++v )
      {
        if ( b & ( 1u << v ) )
          g = tt4::cofactor0( g, v );
      }
      uint16_t h = static_cast<uint16_t>( f ^ g );
      if ( ( tt4::support( h ) & a ) == 0 && ( tt4::support( g ) & b ) == 0 )
      {
        choice ch;
        ch.k = kind::bi_xor; ch.set_a = static_cast<uint8_t>( a ); ch.g = g; ch.h = h;
        consider( 3 + cost( g ) + cost( h ), ch );
      }
    }
    return best_cost;
  }

  std::vector<int16_t> cost_;
  std::vector<choice> choice_;
};

} // namespace detail

/*! \brief Precomputed AIG structure for each of the 222 four-input NPN classes.
 *
 * Entry `c` is a 4-PI, 1-PO AIG implementing the class representative.
 * Built once on first use and shared read-only afterwards.
 */
class StructureTable
{
public:
  static StructureTable const& instance()
  {
    static StructureTable const table;
    return table;
  }

  Aig const& structure( uint32_t cls ) const { return structures_[cls]; }
  uint32_t num_classes() const { return static_cast<uint32_t>( structures_.size() ); }

  /*! \brief Builds a four-input function directly, without going through the class table. */
  static Aig synthesize_tt4( uint16_t f, detail::decomposition_search& search )
  {
    AigBuilder b;
    std::array<Edge, 4> vars;
    for ( auto& v : vars )
      v = b.create_pi();
    std::unordered_map<uint16_t, Edge> memo;
    b.create_po( build( f, b, vars, search, memo ) );
    return b.build();
  }

private:
  StructureTable()
  {
    detail::decomposition_search search;
    auto const& npn = NpnTable::instance();
    structures_.reserve( npn.num_classes() );
    for ( uint32_t c = 0; c < npn.num_classes(); ++c )
    {
      structures_.push_back( synthesize_tt4( npn.representative( c ), search ) );
    }
  }

  static Edge build( uint16_t f, AigBuilder& b, std::array<Edge, 4> const& vars, detail::decomposition_search& search,
                     std::unordered_map<uint16_t, Edge>& memo )
  {
    using kind = detail::decomposition_search::kind;
    if ( auto it = memo.find( f ); it != memo.end() )
      return it->second;
    if ( auto it = memo.find( static_cast<uint16_t>( ~f ) ); it != memo.end() )
      return !it->second;
    auto const ch = search.decision( f );
    Edge r;
    switch ( ch.k )
    {
    case kind::constant:
      r = Edge::constant( f == 0xffff );
      break;
    case kind::literal:
      r = vars[ch.var] ^ ch.var_neg;
      break;
    case kind::and_var:
      r = b.create_and( vars[ch.var] ^ ch.var_neg, build( ch.g, b, vars, search, memo ) ) ^ ch.out_neg;
      break;
    case kind::xor_var:
      r = b.create_xor( vars[ch.var], build( ch.g, b, vars, search, memo ) );
      break;
    case kind::mux:
      r = b.create_mux( vars[ch.var], build( ch.h, b, vars, search, memo ), build( ch.g, b, vars, search, memo ) );
      break;
    case kind::mono:
      r = b.create_or( build( ch.g, b, vars, search, memo ),
                       b.create_and( vars[ch.var] ^ ch.var_neg, build( ch.h, b, vars, search, memo ) ) );
      break;
    case kind::bi_and:
      r = b.create_and( build( ch.g, b, vars, search, memo ), build( ch.h, b, vars, search, memo ) ) ^ ch.out_neg;
      break;
    case kind::bi_xor:
      r = b.create_xor( build( ch.g, b, vars, search, memo ), build( ch.h, b, vars, search, memo ) );
      break;
    }
    memo.emplace( f, r );
    return r;
  }

  std::vector<Aig> structures_;
};

/*! \brief Replays a small single-output AIG on top of `inputs` inside `b`. */
inline Edge instantiate( AigBuilder& b, Aig const& structure, std::span<const Edge> inputs )
{
  std::vector<Edge> map( structure.num_nodes() );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < structure.num_pis(); ++i )
    map[structure.pi_node( i )] = inputs[i];
  structure.foreach_and( [&]( node_id n ) {
    Edge x = structure.fanin0( n ), y = structure.fanin1( n );
    map[n] = b.create_and( map[x.node()] ^ x.complemented(), map[y.node()] ^ y.complemented() );
  } );
  Edge po = structure.po( 0 );
  return map[po.node()] ^ po.complemented();
}

/*! \brief Greedy Shannon decomposition of `f` over `leaves` into `b`.
 *
 * At each step the splitting variable is the one yielding a constant or
 * complementary cofactor, otherwise the one minimising the summed cofactor
 * supports (lowest index on ties).  Sub-functions are memoised so equal
 * cofactors share logic.
 */
class ShannonSynthesizer
{
public:
  ShannonSynthesizer( AigBuilder& b, std::span<const Edge> leaves ) : b_( b ), leaves_( leaves ) {}

  Edge run( TruthTable const& f ) { return rec( f ); }

private:
  Edge rec( TruthTable const& f )
  {
    if ( f.is_const0() )
      return Edge::constant( false );
    if ( f.is_const1() )
      return Edge::constant( true );
    if ( auto it = memo_.find( f ); it != memo_.end() )
      return it->second;
    TruthTable nf = ~f;
    if ( auto it = memo_.find( nf ); it != memo_.end() )
      return !it->second;

    int best_var = -1;
    int best_score = 1 << 20;
    for ( uint32_t v = 0; v < f.num_vars(); ++v )
    {
      TruthTable f0 = f.cofactor0( v ), f1 = f.cofactor1( v );
      if ( f0 == f1 )
        continue;
      int score;
      if ( f0.is_const0() || f0.is_const1() || f1.is_const0() || f1.is_const1() )
        score = -2;
      else if ( f0 == ~f1 )
        score = -1;
      else
        score = static_cast<int>( f0.support_size() + f1.support_size() );
      if ( score < best_score )
      {
        best_score = score;
        best_var = static_cast<int>( v );
      }
    }
    uint32_t v = static_cast<uint32_t>( best_var );
    TruthTable f0 = f.cofactor0( v ), f1 = f.cofactor1( v );
    Edge x = leaves_[v];
    Edge r;
    if ( f0.is_const0() )
      r = b_.create_and( x, rec( f1 ) );
    else if ( f1.is_const0() )
      r = b_.create_and( !x, rec( f0 ) );
    else if ( f0.is_const1() )
      r = !b_.create_and( x, !rec( f1 ) );
    else if ( f1.is_const1() )
      r = !b_.create_and( !x, !rec( f0 ) );
    else if ( f0 == ~f1 )
      r = b_.create_xor( x, rec( f0 ) );
    else
      r = b_.create_mux( x, rec( f1 ), rec( f0 ) );
    memo_.emplace( f, r );
    return r;
  }

  AigBuilder& b_;
  std::span<const Edge> leaves_;
  std::unordered_map<TruthTable, Edge, TruthTableHash> memo_;
};

} // namespace aigopt
