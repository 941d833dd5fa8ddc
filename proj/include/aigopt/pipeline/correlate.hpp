/*!
  \file correlate.hpp
  \brief Correlation of structural features with ground-truth delay
*/

#pragma once

#include "dataset_file.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace aigopt
{

/*! \brief Pearson coefficient; empty when either column has zero variance or fewer than two values. */
inline std::optional<double> pearson( std::span<const double> x, std::span<const double> y )
{
  if ( x.size() != y.size() )
    throw std::invalid_argument( "pearson needs equal-length columns" );
  size_t n = x.size();
  if ( n < 2 )
    return std::nullopt;
  double mx = 0, my = 0;
  for ( size_t i = 0; i < n; ++i )
  {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for ( size_t i = 0; i < n; ++i )
  {
    sxy += ( x[i] - mx ) * ( y[i] - my );
    sxx += ( x[i] - mx ) * ( x[i] - mx );
    syy += ( y[i] - my ) * ( y[i] - my );
  }
  if ( sxx == 0 || syy == 0 )
    return std::nullopt;
  return std::clamp( sxy / std::sqrt( sxx * syy ), -1.0, 1.0 );
}

/*! \brief Two rows with equal level and node count; `slow` has the larger delay. */
struct SameStatsPair
{
  size_t fast{ 0 };
  size_t slow{ 0 };
  double level{ 0 };
  double nodes{ 0 };
  double fast_delay{ 0 };
  double slow_delay{ 0 };
  double relative_difference{ 0 }; //!< (slow - fast) / fast
};

struct CorrelationReport
{
  std::string design;
  size_t rows{ 0 };
  std::optional<double> level_delay;
  std::vector<std::pair<std::string, std::optional<double>>> feature_delay;
  size_t min_delay_row{ 0 };
  size_t min_level_row{ 0 };
  /*! \brief The fastest AIG has more levels than the shallowest one. */
  bool min_delay_not_min_level{ false };
  size_t stat_groups{ 0 };
  size_t groups_over_threshold{ 0 };
  std::optional<SameStatsPair> widest_pair;
};

inline constexpr size_t correlation_min_rows = 30;

/*! \brief Correlation study over one table; `threshold` is the relative delay gap counted per (level, nodes) group. */
inline CorrelationReport correlate( CorpusTable const& t, std::string design = {}, double threshold = 0.05 )
{
  if ( t.rows.size() < correlation_min_rows )
    throw DataError( "correlation needs at least " + std::to_string( correlation_min_rows ) + " rows, got " + std::to_string( t.rows.size() ) );
  CorrelationReport r;
  r.design = std::move( design );
  r.rows = t.rows.size();
  size_t lc = t.column( "aig_level" ), nc = t.column( "number_of_node" );

  std::vector<double> delay;
  for ( auto const& row : t.rows )
    delay.push_back( row.delay );
  for ( size_t c = 0; c < t.feature_names.size(); ++c )
  {
    std::vector<double> col;
    for ( auto const& row : t.rows )
      col.push_back( row.features[c] );
    auto p = pearson( col, delay );
    r.feature_delay.emplace_back( t.feature_names[c], p );
    if ( c == lc )
      r.level_delay = p;
  }

  for ( size_t i = 1; i < t.rows.size(); ++i )
  {
    if ( t.rows[i].delay < t.rows[r.min_delay_row].delay )
      r.min_delay_row = i;
    if ( t.rows[i].features[lc] < t.rows[r.min_level_row].features[lc] )
      r.min_level_row = i;
  }
  r.min_delay_not_min_level = t.rows[r.min_delay_row].features[lc] > t.rows[r.min_level_row].features[lc];

  std::map<std::pair<double, double>, std::pair<size_t, size_t>> groups; // (level, nodes) -> (fastest, slowest)
  for ( size_t i = 0; i < t.rows.size(); ++i )
  {
    auto key = std::make_pair( t.rows[i].features[lc], t.rows[i].features[nc] );
    auto [it, fresh] = groups.emplace( key, std::make_pair( i, i ) );
    if ( fresh )
      continue;
    if ( t.rows[i].delay < t.rows[it->second.first].delay )
      it->second.first = i;
    if ( t.rows[i].delay > t.rows[it->second.second].delay )
      it->second.second = i;
  }
  r.stat_groups = groups.size();
  for ( auto const& [key, ext] : groups )
  {
    double lo = t.rows[ext.first].delay, hi = t.rows[ext.second].delay;
    if ( ext.first == ext.second || !( lo > 0 ) )
      continue;
    double rel = ( hi - lo ) / lo;
    if ( rel > threshold )
      ++r.groups_over_threshold;
    if ( !r.widest_pair || rel > r.widest_pair->relative_difference )
      r.widest_pair = SameStatsPair{ ext.first, ext.second, key.first, key.second, lo, hi, rel };
  }
  return r;
}

inline nlohmann::ordered_json to_json( CorrelationReport const& r )
{
  auto opt = []( std::optional<double> v ) { return v ? nlohmann::ordered_json( *v ) : nlohmann::ordered_json( nullptr ); };
  nlohmann::ordered_json j;
  j["design"] = r.design;
  j["rows"] = r.rows;
  j["level_delay_pearson"] = opt( r.level_delay );
  auto& f = j["feature_delay_pearson"] = nlohmann::ordered_json::object();
  for ( auto const& [name, p] : r.feature_delay )
    f[name] = opt( p );
  j["min_delay_row"] = r.min_delay_row;
  j["min_level_row"] = r.min_level_row;
  j["min_delay_not_min_level"] = r.min_delay_not_min_level;
  j["level_node_groups"] = r.stat_groups;
  j["groups_over_threshold"] = r.groups_over_threshold;
  if ( r.widest_pair )
  {
    auto const& p = *r.widest_pair;
    j["widest_same_stats_pair"] = { { "fast_row", p.fast },         { "slow_row", p.slow },
                                    { "level", p.level },           { "nodes", p.nodes },
                                    { "fast_delay", p.fast_delay }, { "slow_delay", p.slow_delay },
                                    { "relative_difference", p.relative_difference } };
  }
  else
  {
    j["widest_same_stats_pair"] = nullptr;
  }
  return j;
}

inline std::string to_text( CorrelationReport const& r )
{
  std::ostringstream os;
  auto opt = []( std::optional<double> v ) { return v ? format_double( *v ) : std::string( "undefined" ); };
  os << "design " << r.design << ", " << r.rows << " rows\n";
  os << "pearson(aig_level, delay) = " << opt( r.level_delay ) << "\n";
  os << "min-delay row " << r.min_delay_row << ", min-level row " << r.min_level_row
     << ( r.min_delay_not_min_level ? " (fastest AIG is not the shallowest)\n" : " (fastest AIG is among the shallowest)\n" );
  os << r.groups_over_threshold << " of " << r.stat_groups << " (level, nodes) groups have delay spread above threshold\n";
  if ( r.widest_pair )
  {
    auto const& p = *r.widest_pair;
    os << "widest pair: rows " << p.fast << " and " << p.slow << " at level " << p.level << ", " << p.nodes << " nodes, delay "
       << p.fast_delay << " vs " << p.slow_delay << " (+" << 100 * p.relative_difference << "%)\n";
  }
  os << "per-feature pearson with delay:\n";
  for ( auto const& [name, p] : r.feature_delay )
    os << "  " << name << " " << opt( p ) << "\n";
  return os.str();
}

} // namespace aigopt
