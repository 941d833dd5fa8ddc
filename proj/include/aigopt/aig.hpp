/*!
  \file aig.hpp
  \brief And-inverter graph with complemented edges and a structural-hashing builder
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace aigopt
{

using node_id = uint32_t;

/*! \brief Reference to a node with an optional inversion.
 *
 * Encoded as an AIGER literal: `2 * node + complemented`.  Literal 0 is the
 * constant false, literal 1 the constant true.
 */
class Edge
{
public:
  constexpr Edge() = default;
  constexpr Edge( node_id node, bool complemented ) : lit_( ( node << 1 ) | ( complemented ? 1u : 0u ) ) {}

  static constexpr Edge from_literal( uint32_t lit )
  {
    Edge e;
    e.lit_ = lit;
    return e;
  }

  static constexpr Edge constant( bool value ) { return from_literal( value ? 1u : 0u ); }

  constexpr node_id node() const { return lit_ >> 1; }
  constexpr bool complemented() const { return ( lit_ & 1u ) != 0; }
  constexpr uint32_t literal() const { return lit_; }
  constexpr bool is_constant() const { return node() == 0; }

  constexpr Edge operator!() const { return from_literal( lit_ ^ 1u ); }
  constexpr Edge operator^( bool c ) const { return from_literal( lit_ ^ ( c ? 1u : 0u ) ); }
  constexpr Edge regular() const { return from_literal( lit_ & ~1u ); }

  constexpr auto operator<=>( Edge const& ) const = default;

private:
  uint32_t lit_{ 0 };
};

/*! \brief Proxy metrics of an AIG: live AND count and depth in AND nodes. */
struct AigStats
{
  uint32_t node_count{ 0 };
  uint32_t level{ 0 };

  bool operator==( AigStats const& ) const = default;
};

/*! \brief Immutable combinational AIG.
 *
 * Node ids are dense and topologically ordered: node 0 is the constant,
 * nodes `1..num_pis()` are primary inputs in declaration order, and every
 * following node is a two-input AND whose fanins have smaller ids.
 * Instances are produced by `AigBuilder::build` or the AIGER reader.
 */
class Aig
{
public:
  struct AndNode
  {
    Edge fanin0;
    Edge fanin1;
  };

  Aig() = default;

  uint32_t num_nodes() const { return 1u + num_pis_ + static_cast<uint32_t>( ands_.size() ); }
  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_pos() const { return static_cast<uint32_t>( pos_.size() ); }
  uint32_t num_ands() const { return static_cast<uint32_t>( ands_.size() ); }

  bool is_constant( node_id n ) const { return n == 0; }
  bool is_pi( node_id n ) const { return n >= 1 && n <= num_pis_; }
  bool is_and( node_id n ) const { return n > num_pis_ && n < num_nodes(); }

  node_id pi_node( uint32_t index ) const { return 1u + index; }
  node_id first_and() const { return 1u + num_pis_; }

  Edge fanin0( node_id n ) const { return ands_[n - first_and()].fanin0; }
  Edge fanin1( node_id n ) const { return ands_[n - first_and()].fanin1; }

  std::span<const Edge> pos() const { return pos_; }
  Edge po( uint32_t index ) const { return pos_[index]; }

  std::string const& name() const { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  template<typename Fn>
  void foreach_and( Fn&& fn ) const
  {
    for ( node_id n = first_and(); n < num_nodes(); ++n )
    {
      fn( n );
    }
  }

  /*! \brief Exact structural identity: same PIs, same AND array, same POs. */
  bool structurally_equal( Aig const& other ) const
  {
    if ( num_pis_ != other.num_pis_ || ands_.size() != other.ands_.size() || pos_ != other.pos_ )
    {
      return false;
    }
    for ( size_t i = 0; i < ands_.size(); ++i )
    {
      if ( ands_[i].fanin0 != other.ands_[i].fanin0 || ands_[i].fanin1 != other.ands_[i].fanin1 )
      {
        return false;
      }
    }
    return true;
  }

private:
  friend class AigBuilder;

  uint32_t num_pis_{ 0 };
  std::vector<AndNode> ands_;
  std::vector<Edge> pos_;
  std::string name_;
};

/*! \brief Single-owner builder with structural hashing and trivial simplification.
 *
 * `create_and` normalizes the fanin order, folds AND(x,0)=0, AND(x,1)=x,
 * AND(x,x)=x, AND(x,!x)=0, and returns an existing node when the
 * normalized pair was seen before.  `build` removes nodes not reachable
 * from any PO and renumbers densely.
 */
class AigBuilder
{
public:
  AigBuilder() { kinds_.push_back( kind::constant ); fanins_.push_back( {} ); }

  /*! \brief Seeds a builder with the PIs of `aig` (same order) and returns their edges. */
  static AigBuilder with_pis_of( Aig const& aig, std::vector<Edge>& pi_edges )
  {
    AigBuilder b;
    b.reserve( aig.num_nodes() );
    pi_edges.clear();
    for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    {
      pi_edges.push_back( b.create_pi() );
    }
    return b;
  }

  void reserve( size_t nodes )
  {
    kinds_.reserve( nodes );
    fanins_.reserve( nodes );
    strash_.reserve( nodes * 2 );
  }

  Edge create_pi()
  {
    node_id n = static_cast<node_id>( kinds_.size() );
    kinds_.push_back( kind::pi );
    fanins_.push_back( {} );
    ++num_pis_;
    return Edge( n, false );
  }

  Edge create_and( Edge a, Edge b )
  {
    if ( auto simple = simplify( a, b ) )
    {
      return *simple;
    }
    if ( a.literal() > b.literal() )
    {
      std::swap( a, b );
    }
    uint64_t key = pack( a, b );
    if ( auto it = strash_.find( key ); it != strash_.end() )
    {
      return Edge( it->second, false );
    }
    node_id n = static_cast<node_id>( kinds_.size() );
    kinds_.push_back( kind::and_gate );
    fanins_.push_back( { a, b } );
    strash_.emplace( key, n );
    ++num_ands_;
    return Edge( n, false );
  }

  Edge create_or( Edge a, Edge b ) { return !create_and( !a, !b ); }
  Edge create_xor( Edge a, Edge b ) { return create_and( !create_and( a, b ), !create_and( !a, !b ) ); }
  Edge create_mux( Edge s, Edge t, Edge e ) { return !create_and( !create_and( s, t ), !create_and( !s, e ) ); }

  /*! \brief Looks up AND(a,b) without inserting; returns the simplified or hashed edge if it exists. */
  std::optional<Edge> find_and( Edge a, Edge b ) const
  {
    if ( auto simple = simplify( a, b ) )
    {
      return simple;
    }
    if ( a.literal() > b.literal() )
    {
      std::swap( a, b );
    }
    if ( auto it = strash_.find( pack( a, b ) ); it != strash_.end() )
    {
      return Edge( it->second, false );
    }
    return std::nullopt;
  }

  void create_po( Edge e ) { pos_.push_back( e ); }

  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_ands() const { return num_ands_; }
  uint32_t size() const { return static_cast<uint32_t>( kinds_.size() ); }
  bool is_and( node_id n ) const { return kinds_[n] == kind::and_gate; }
  Edge fanin0( node_id n ) const { return fanins_[n].first; }
  Edge fanin1( node_id n ) const { return fanins_[n].second; }

  /*! \brief Garbage-collects unreachable ANDs and returns the finished AIG. */
  Aig build( std::string name = {} ) const
  {
    std::vector<uint8_t> live( kinds_.size(), 0 );
    std::vector<node_id> stack;
    for ( auto const& po : pos_ )
    {
      stack.push_back( po.node() );
    }
    while ( !stack.empty() )
    {
      node_id n = stack.back();
      stack.pop_back();
      if ( live[n] )
      {
        continue;
      }
      live[n] = 1;
      if ( kinds_[n] == kind::and_gate )
      {
        stack.push_back( fanins_[n].first.node() );
        stack.push_back( fanins_[n].second.node() );
      }
    }

    Aig aig;
    aig.name_ = std::move( name );
    aig.num_pis_ = num_pis_;
    std::vector<node_id> remap( kinds_.size(), 0 );
    node_id next = 1;
    for ( node_id n = 0; n < kinds_.size(); ++n )
    {
      if ( kinds_[n] == kind::pi )
      {
        remap[n] = next++;
      }
    }
    auto map_edge = [&]( Edge e ) { return Edge( remap[e.node()], e.complemented() ); };
    aig.ands_.reserve( num_ands_ );
    for ( node_id n = 0; n < kinds_.size(); ++n )
    {
      if ( kinds_[n] == kind::and_gate && live[n] )
      {
        remap[n] = next++;
        Edge a = map_edge( fanins_[n].first );
        Edge b = map_edge( fanins_[n].second );
        if ( a.literal() > b.literal() )
        {
          std::swap( a, b );
        }
        aig.ands_.push_back( { a, b } );
      }
    }
    aig.pos_.reserve( pos_.size() );
    for ( auto const& po : pos_ )
    {
      aig.pos_.push_back( map_edge( po ) );
    }
    return aig;
  }

private:
  enum class kind : uint8_t
  {
    constant,
    pi,
    and_gate
  };

  static uint64_t pack( Edge a, Edge b ) { return ( uint64_t( a.literal() ) << 32 ) | b.literal(); }

  static std::optional<Edge> simplify( Edge a, Edge b )
  {
    if ( a == Edge::constant( false ) || b == Edge::constant( false ) || a == !b )
    {
      return Edge::constant( false );
    }
    if ( a == Edge::constant( true ) || a == b )
    {
      return b;
    }
    if ( b == Edge::constant( true ) )
    {
      return a;
    }
    return std::nullopt;
  }

  std::vector<kind> kinds_;
  std::vector<std::pair<Edge, Edge>> fanins_;
  std::unordered_map<uint64_t, node_id> strash_;
  std::vector<Edge> pos_;
  uint32_t num_pis_{ 0 };
  uint32_t num_ands_{ 0 };
};

/*! \brief Copies `aig` through a fresh builder (strash + GC). */
inline Aig rebuild( Aig const& aig )
{
  std::vector<Edge> map( aig.num_nodes() );
  std::vector<Edge> pis;
  AigBuilder b = AigBuilder::with_pis_of( aig, pis );
  map[0] = Edge::constant( false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    map[aig.pi_node( i )] = pis[i];
  }
  aig.foreach_and( [&]( node_id n ) {
    Edge a = aig.fanin0( n ), c = aig.fanin1( n );
    map[n] = b.create_and( map[a.node()] ^ a.complemented(), map[c.node()] ^ c.complemented() );
  } );
  for ( auto po : aig.pos() )
  {
    b.create_po( map[po.node()] ^ po.complemented() );
  }
  return b.build( aig.name() );
}

/*! \brief Per-node level: 0 for constant and PIs, 1 + max fanin level for ANDs. */
inline std::vector<uint32_t> node_levels( Aig const& aig )
{
  std::vector<uint32_t> level( aig.num_nodes(), 0 );
  aig.foreach_and( [&]( node_id n ) {
    level[n] = 1 + std::max( level[aig.fanin0( n ).node()], level[aig.fanin1( n ).node()] );
  } );
  return level;
}

/*! \brief Number of edge references to every node, PO references included. */
inline std::vector<uint32_t> fanout_counts( Aig const& aig )
{
  std::vector<uint32_t> refs( aig.num_nodes(), 0 );
  aig.foreach_and( [&]( node_id n ) {
    ++refs[aig.fanin0( n ).node()];
    ++refs[aig.fanin1( n ).node()];
  } );
  for ( auto po : aig.pos() )
  {
    ++refs[po.node()];
  }
  return refs;
}

inline AigStats compute_stats( Aig const& aig )
{
  AigStats st;
  st.node_count = aig.num_ands();
  auto level = node_levels( aig );
  for ( auto po : aig.pos() )
  {
    st.level = std::max( st.level, level[po.node()] );
  }
  return st;
}

/*! \brief Checks the structural invariants; returns an empty string when valid. */
inline std::string validate( Aig const& aig )
{
  std::unordered_map<uint64_t, node_id> seen;
  for ( node_id n = aig.first_and(); n < aig.num_nodes(); ++n )
  {
    Edge a = aig.fanin0( n ), b = aig.fanin1( n );
    if ( a.node() >= n || b.node() >= n )
    {
      return "node " + std::to_string( n ) + " has a fanin that is not topologically earlier";
    }
    if ( a.is_constant() || b.is_constant() || a.node() == b.node() )
    {
      return "node " + std::to_string( n ) + " is trivially simplifiable";
    }
    uint64_t key = ( uint64_t( std::min( a.literal(), b.literal() ) ) << 32 ) | std::max( a.literal(), b.literal() );
    if ( !seen.emplace( key, n ).second )
    {
      return "node " + std::to_string( n ) + " duplicates node " + std::to_string( seen[key] );
    }
  }
  for ( auto po : aig.pos() )
  {
    if ( po.node() >= aig.num_nodes() )
    {
      return "PO references a missing node";
    }
  }
  auto refs = fanout_counts( aig );
  for ( node_id n = aig.first_and(); n < aig.num_nodes(); ++n )
  {
    if ( refs[n] == 0 )
    {
      return "node " + std::to_string( n ) + " is dead";
    }
  }
  return {};
}

} // namespace aigopt
