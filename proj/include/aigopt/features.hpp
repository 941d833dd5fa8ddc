/*!
  \file features.hpp
  \brief Structural feature vector of an AIG for delay prediction
*/

#pragma once

#include "aig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aigopt
{

struct FeatureConfig
{
  uint32_t n_depth{ 3 };
  uint32_t n_paths{ 3 };

  uint32_t dimension() const { return 10u + 3u * n_depth + n_paths; }
  bool operator==( FeatureConfig const& ) const = default;
};

enum class depth_weighting
{
  unit,
  fanout,
  binary
};

/*! \brief Per-PO maxima over PI-to-PO paths, and per-PO path counts. */
struct PoDepthProfile
{
  std::vector<double> unit;
  std::vector<double> fanout;
  std::vector<double> binary;
  std::vector<double> paths;
};

/*! \brief Path counts saturate here, so every stored count is an exact double. */
inline constexpr double path_count_cap = 9007199254740992.0; // 2^53

/*! \brief Heaviest PI-to-PO path per PO.
 *
 * A path's weight sums over its PI and every AND node up to and including the
 * PO driver.  Node weights are 1 (unit), the node's fanout (fanout), or 1 for
 * nodes with fanout of at least 2 and 0 otherwise (binary).  Fanout counts
 * every reference, PO references included.  A PO driven by the constant has
 * no PI-to-PO path and gets 0.
 */
inline std::vector<double> node_depths( Aig const& aig, depth_weighting w )
{
  auto refs = fanout_counts( aig );
  auto weight = [&]( node_id n ) -> double {
    switch ( w )
    {
    case depth_weighting::unit: return 1.0;
    case depth_weighting::fanout: return refs[n];
    case depth_weighting::binary: return refs[n] >= 2 ? 1.0 : 0.0;
    }
    return 0.0;
  };
  std::vector<double> depth( aig.num_nodes(), 0.0 );
  std::vector<bool> reaches_pi( aig.num_nodes(), false );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    depth[aig.pi_node( i )] = weight( aig.pi_node( i ) );
    reaches_pi[aig.pi_node( i )] = true;
  }
  aig.foreach_and( [&]( node_id n ) {
    node_id a = aig.fanin0( n ).node(), b = aig.fanin1( n ).node();
    double d = 0;
    if ( reaches_pi[a] )
      d = depth[a];
    if ( reaches_pi[b] )
      d = std::max( d, depth[b] );
    reaches_pi[n] = reaches_pi[a] || reaches_pi[b];
    depth[n] = reaches_pi[n] ? d + weight( n ) : 0.0;
  } );
  std::vector<double> out;
  for ( auto po : aig.pos() )
    out.push_back( depth[po.node()] );
  return out;
}

/*! \brief Number of distinct PI-to-PO paths per PO, saturating at path_count_cap. */
inline std::vector<double> count_paths( Aig const& aig )
{
  std::vector<double> paths( aig.num_nodes(), 0.0 );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    paths[aig.pi_node( i )] = 1.0;
  aig.foreach_and( [&]( node_id n ) {
    paths[n] = std::min( path_count_cap, paths[aig.fanin0( n ).node()] + paths[aig.fanin1( n ).node()] );
  } );
  std::vector<double> out;
  for ( auto po : aig.pos() )
    out.push_back( paths[po.node()] );
  return out;
}

inline PoDepthProfile po_depth_profile( Aig const& aig )
{
  return { node_depths( aig, depth_weighting::unit ), node_depths( aig, depth_weighting::fanout ),
           node_depths( aig, depth_weighting::binary ), count_paths( aig ) };
}

/*! \brief The `n` largest values in descending order, zero-padded. */
inline std::vector<double> top_n( std::vector<double> values, uint32_t n )
{
  if ( n == 0 )
    throw std::invalid_argument( "top_n needs n >= 1" );
  std::sort( values.begin(), values.end(), std::greater<>() );
  values.resize( n, 0.0 );
  return values;
}

struct FanoutStats
{
  double mean{ 0 };
  double max{ 0 };
  double std{ 0 };
  double sum{ 0 };

  bool operator==( FanoutStats const& ) const = default;
};

enum class fanout_scope
{
  all_nodes,
  long_path_nodes
};

/*! \brief Nodes on at least one path whose length equals the AIG level.
 *
 * Uses AND-node levels from the PIs and AND-node heights to the POs; a node is
 * on a long path when level + height equals the overall level.
 */
inline std::vector<bool> long_path_nodes( Aig const& aig )
{
  auto level = node_levels( aig );
  uint32_t top = 0;
  for ( auto po : aig.pos() )
    top = std::max( top, level[po.node()] );
  std::vector<int64_t> height( aig.num_nodes(), -1 );
  for ( auto po : aig.pos() )
    height[po.node()] = 0;
  for ( node_id n = aig.num_nodes(); n-- > aig.first_and(); )
  {
    if ( height[n] < 0 )
      continue;
    for ( Edge e : { aig.fanin0( n ), aig.fanin1( n ) } )
      height[e.node()] = std::max( height[e.node()], height[n] + 1 );
  }
  std::vector<bool> on( aig.num_nodes(), false );
  for ( node_id n = 1; n < aig.num_nodes(); ++n )
    on[n] = height[n] >= 0 && level[n] + height[n] == static_cast<int64_t>( top );
  return on;
}

/*! \brief Population statistics of fanout counts over PIs and AND nodes (the constant only when referenced). */
inline FanoutStats fanout_stats( Aig const& aig, fanout_scope scope )
{
  auto refs = fanout_counts( aig );
  std::vector<bool> in_scope( aig.num_nodes(), true );
  if ( scope == fanout_scope::long_path_nodes )
    in_scope = long_path_nodes( aig );
  if ( refs[0] == 0 )
    in_scope[0] = false;

  FanoutStats s;
  double count = 0;
  for ( node_id n = 0; n < aig.num_nodes(); ++n )
  {
    if ( !in_scope[n] )
      continue;
    count += 1;
    s.sum += refs[n];
    s.max = std::max( s.max, static_cast<double>( refs[n] ) );
  }
  if ( count == 0 )
    return {};
  s.mean = s.sum / count;
  double sq = 0;
  for ( node_id n = 0; n < aig.num_nodes(); ++n )
    if ( in_scope[n] )
      sq += ( refs[n] - s.mean ) * ( refs[n] - s.mean );
  s.std = std::sqrt( sq / count );
  return s;
}

struct FeatureVector
{
  double number_of_node{ 0 };
  double aig_level{ 0 };
  std::vector<double> long_path_depth;
  std::vector<double> weighted_path_depth;
  std::vector<double> binary_weighted_path_depth;
  FanoutStats fanout;
  FanoutStats lp_fanout;
  std::vector<double> num_of_paths; //!< log1p of the saturated path count

  /*! \brief Flat row in header order. */
  std::vector<double> row() const
  {
    std::vector<double> r{ number_of_node, aig_level };
    r.insert( r.end(), long_path_depth.begin(), long_path_depth.end() );
    r.insert( r.end(), weighted_path_depth.begin(), weighted_path_depth.end() );
    r.insert( r.end(), binary_weighted_path_depth.begin(), binary_weighted_path_depth.end() );
    r.insert( r.end(), { fanout.mean, fanout.max, fanout.std, fanout.sum } );
    r.insert( r.end(), { lp_fanout.mean, lp_fanout.max, lp_fanout.std, lp_fanout.sum } );
    r.insert( r.end(), num_of_paths.begin(), num_of_paths.end() );
    return r;
  }

  bool operator==( FeatureVector const& ) const = default;
};

/*! \brief Column names matching FeatureVector::row(). */
inline std::vector<std::string> feature_header( FeatureConfig const& cfg = {} )
{
  std::vector<std::string> h{ "number_of_node", "aig_level" };
  for ( char const* family : { "long_path_depth", "weighted_path_depth", "binary_weighted_path_depth" } )
    for ( uint32_t i = 1; i <= cfg.n_depth; ++i )
      h.push_back( std::string( family ) + "_" + std::to_string( i ) );
  for ( char const* s : { "fanout_mean", "fanout_max", "fanout_std", "fanout_sum", "lp_fanout_mean", "lp_fanout_max", "lp_fanout_std",
                          "lp_fanout_sum" } )
    h.push_back( s );
  for ( uint32_t i = 1; i <= cfg.n_paths; ++i )
    h.push_back( "num_of_paths_" + std::to_string( i ) );
  return h;
}

inline FeatureVector extract_features( Aig const& aig, FeatureConfig const& cfg = {} )
{
  if ( cfg.n_depth == 0 || cfg.n_paths == 0 )
    throw std::invalid_argument( "feature top-n sizes must be at least 1" );
  auto stats = compute_stats( aig );
  auto profile = po_depth_profile( aig );
  FeatureVector v;
  v.number_of_node = stats.node_count;
  v.aig_level = stats.level;
  v.long_path_depth = top_n( profile.unit, cfg.n_depth );
  v.weighted_path_depth = top_n( profile.fanout, cfg.n_depth );
  v.binary_weighted_path_depth = top_n( profile.binary, cfg.n_depth );
  v.fanout = fanout_stats( aig, fanout_scope::all_nodes );
  v.lp_fanout = fanout_stats( aig, fanout_scope::long_path_nodes );
  v.num_of_paths = top_n( profile.paths, cfg.n_paths );
  for ( auto& p : v.num_of_paths )
    p = std::log1p( p );
  return v;
}

} // namespace aigopt
