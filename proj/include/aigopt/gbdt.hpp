/*!
  \file gbdt.hpp
  \brief Least-squares gradient-boosted regression trees
*/

#pragma once

#include "util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aigopt
{

struct GbdtHyperparams
{
  double learning_rate{ 0.05 };
  uint32_t max_depth{ 8 };
  uint32_t n_estimators{ 500 };
  double subsample{ 0.8 };
  uint32_t min_samples_leaf{ 5 };
  uint64_t seed{ 1 };
  /*! \brief Optional feature column the trees predict per unit of; empty means the raw label. */
  std::string target_scale;

  /*! \brief 500 trees of depth 8, learning rate 0.05, subsample 0.8. */
  static GbdtHyperparams desk() { return {}; }

  /*! \brief 5000 trees of depth 16, learning rate 0.01, subsample 0.8. */
  static GbdtHyperparams paper() { return { 0.01, 16, 5000, 0.8, 5, 1, {} }; }

  void validate() const
  {
    if ( !( learning_rate > 0 && learning_rate <= 1 ) )
      throw std::invalid_argument( "learning_rate must be in (0, 1]" );
    if ( max_depth < 1 )
      throw std::invalid_argument( "max_depth must be at least 1" );
    if ( n_estimators < 1 )
      throw std::invalid_argument( "n_estimators must be at least 1" );
    if ( !( subsample > 0 && subsample <= 1 ) )
      throw std::invalid_argument( "subsample must be in (0, 1]" );
    if ( min_samples_leaf < 1 )
      throw std::invalid_argument( "min_samples_leaf must be at least 1" );
  }
};

class Dataset
{
public:
  Dataset() = default;
  explicit Dataset( std::vector<std::string> header ) : header_( std::move( header ) ) {}

  void add( std::vector<double> row, double label, std::string tag = {} )
  {
    if ( row.size() != header_.size() )
      throw std::invalid_argument( "row width " + std::to_string( row.size() ) + " differs from header width " +
                                   std::to_string( header_.size() ) );
    for ( double v : row )
      if ( !std::isfinite( v ) )
        throw std::invalid_argument( "non-finite feature value" );
    if ( !std::isfinite( label ) )
      throw std::invalid_argument( "non-finite label" );
    rows_.push_back( std::move( row ) );
    labels_.push_back( label );
    tags_.push_back( std::move( tag ) );
  }

  size_t size() const { return rows_.size(); }
  size_t width() const { return header_.size(); }
  std::vector<std::string> const& header() const { return header_; }
  std::vector<double> const& row( size_t i ) const { return rows_[i]; }
  double label( size_t i ) const { return labels_[i]; }
  std::string const& tag( size_t i ) const { return tags_[i]; }
  std::vector<double> const& labels() const { return labels_; }

  /*! \brief Rows whose tag satisfies `keep`, order preserved. */
  template<typename Pred>
  Dataset filter( Pred&& keep ) const
  {
    Dataset d( header_ );
    for ( size_t i = 0; i < size(); ++i )
      if ( keep( tags_[i] ) )
        d.add( rows_[i], labels_[i], tags_[i] );
    return d;
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> labels_;
  std::vector<std::string> tags_;
};

/*! \brief Pre-order node list; a split sends x[feature] <= threshold left. */
struct RegressionTree
{
  struct Node
  {
    int32_t feature{ -1 }; //!< -1 for a leaf
    double threshold{ 0 };
    double value{ 0 };
    uint32_t left{ 0 };
    uint32_t right{ 0 };
  };
  std::vector<Node> nodes;

  double predict( std::span<const double> x ) const
  {
    uint32_t i = 0;
    while ( nodes[i].feature >= 0 )
      i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].value;
  }

  uint32_t depth( uint32_t i = 0 ) const
  {
    if ( nodes[i].feature < 0 )
      return 0;
    return 1 + std::max( depth( nodes[i].left ), depth( nodes[i].right ) );
  }
};

class ModelError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class GbdtModel
{
public:
  GbdtModel() = default;
  GbdtModel( double base, std::vector<RegressionTree> trees, GbdtHyperparams hp, std::vector<std::string> header )
      : base_( base ), trees_( std::move( trees ) ), hp_( hp ), header_( std::move( header ) )
  {
  }

  /*! \brief base + learning_rate * sum of tree outputs, summed in tree order, times the target scale if any. */
  double predict( std::span<const double> x ) const
  {
    if ( x.size() != header_.size() )
      throw std::invalid_argument( "feature width " + std::to_string( x.size() ) + " differs from model width " +
                                   std::to_string( header_.size() ) );
    double sum = 0;
    for ( auto const& t : trees_ )
      sum += t.predict( x );
    return ( base_ + hp_.learning_rate * sum ) * scale_of( x );
  }

  /*! \brief Divisor applied to labels before fitting; 1 without a target scale. */
  double scale_of( std::span<const double> x ) const
  {
    if ( hp_.target_scale.empty() )
      return 1.0;
    return std::max( 1.0, x[scale_column( header_, hp_.target_scale )] );
  }

  static size_t scale_column( std::vector<std::string> const& header, std::string const& name )
  {
    auto it = std::find( header.begin(), header.end(), name );
    if ( it == header.end() )
      throw std::invalid_argument( "target scale column '" + name + "' is not a feature" );
    return static_cast<size_t>( it - header.begin() );
  }

  std::vector<double> predict_batch( Dataset const& d ) const
  {
    std::vector<double> out;
    out.reserve( d.size() );
    for ( size_t i = 0; i < d.size(); ++i )
      out.push_back( predict( d.row( i ) ) );
    return out;
  }

  double base_prediction() const { return base_; }
  std::vector<RegressionTree> const& trees() const { return trees_; }
  GbdtHyperparams const& hyperparams() const { return hp_; }
  std::vector<std::string> const& feature_header() const { return header_; }

private:
  double base_{ 0 };
  std::vector<RegressionTree> trees_;
  GbdtHyperparams hp_;
  std::vector<std::string> header_;
};

namespace detail
{

/* Candidate splits whose gains differ by less than this relative amount are ties. */
inline constexpr double split_gain_tolerance = 1e-12;

inline bool better_gain( double gain, double best )
{
  return gain > best + split_gain_tolerance * std::max( 1.0, std::abs( best ) );
}

struct split_choice
{
  int32_t feature{ -1 };
  double threshold{ 0 };
  double gain{ 0 };
};

/* Threshold between two adjacent distinct sorted values that keeps `lo` left and `hi` right. */
inline double midpoint( double lo, double hi )
{
  double t = lo + ( hi - lo ) / 2;
  return t >= hi ? lo : t;
}

class tree_builder
{
public:
  tree_builder( std::vector<std::vector<double>> const& cols, std::vector<std::vector<uint32_t>> const& sorted, GbdtHyperparams const& hp )
      : cols_( cols ), sorted_( sorted ), hp_( hp )
  {
  }

  /* Level-wise exact greedy growth over the sampled rows. */
  RegressionTree build( std::vector<double> const& target, std::vector<uint32_t> const& sample )
  {
    size_t n_rows = target.size();
    struct level_node
    {
      uint32_t id;
      double sum{ 0 };
      uint32_t count{ 0 };
    };
    std::vector<raw_node> raw( 1 );
    std::vector<int32_t> slot( n_rows, -1 ); // position of a row's node in the current level
    std::vector<level_node> level{ { 0 } };
    for ( auto r : sample )
    {
      slot[r] = 0;
      level[0].sum += target[r];
      ++level[0].count;
    }

    for ( uint32_t depth = 0; !level.empty(); ++depth )
    {
      std::vector<split_choice> best( level.size() );
      if ( depth < hp_.max_depth )
        find_splits( target, slot, level.size(), [&]( size_t j ) { return std::pair{ level[j].sum, level[j].count }; }, best );

      std::vector<level_node> next;
      std::vector<int32_t> child_slot( level.size() * 2, -1 );
      for ( size_t j = 0; j < level.size(); ++j )
      {
        auto& node = raw[level[j].id];
        node.value = level[j].count ? level[j].sum / level[j].count : 0.0;
        if ( best[j].feature < 0 )
          continue;
        node.feature = best[j].feature;
        node.threshold = best[j].threshold;
        node.left = static_cast<uint32_t>( raw.size() );
        node.right = node.left + 1;
        raw.emplace_back();
        raw.emplace_back();
        child_slot[2 * j] = static_cast<int32_t>( next.size() );
        next.push_back( { raw[level[j].id].left } );
        child_slot[2 * j + 1] = static_cast<int32_t>( next.size() );
        next.push_back( { raw[level[j].id].right } );
      }
      for ( auto r : sample )
      {
        if ( slot[r] < 0 )
          continue;
        auto const& node = raw[level[slot[r]].id];
        if ( node.feature < 0 )
        {
          slot[r] = -1;
          continue;
        }
        bool go_left = cols_[node.feature][r] <= node.threshold;
        int32_t s = child_slot[2 * slot[r] + ( go_left ? 0 : 1 )];
        slot[r] = s;
        next[s].sum += target[r];
        ++next[s].count;
      }
      level = std::move( next );
    }
    return to_preorder( raw );
  }

private:
  struct raw_node
  {
    int32_t feature{ -1 };
    double threshold{ 0 };
    double value{ 0 };
    uint32_t left{ 0 };
    uint32_t right{ 0 };
  };

  template<typename Totals>
  void find_splits( std::vector<double> const& target, std::vector<int32_t> const& slot, size_t n_nodes, Totals&& totals,
                    std::vector<split_choice>& best )
  {
    uint32_t min_leaf = hp_.min_samples_leaf;
    std::vector<double> parent_score( n_nodes );
    for ( size_t j = 0; j < n_nodes; ++j )
    {
      auto [s, c] = totals( j );
      parent_score[j] = c ? s * s / c : 0.0;
    }
    std::vector<double> left_sum( n_nodes );
    std::vector<uint32_t> left_count( n_nodes );
    std::vector<double> last( n_nodes );
    for ( size_t f = 0; f < cols_.size(); ++f )
    {
      std::fill( left_sum.begin(), left_sum.end(), 0.0 );
      std::fill( left_count.begin(), left_count.end(), 0u );
      auto const& col = cols_[f];
      for ( auto r : sorted_[f] )
      {
        int32_t j = slot[r];
        if ( j < 0 )
          continue;
        double x = col[r];
        auto [total_sum, total_count] = totals( j );
        uint32_t nl = left_count[j], nr = total_count - nl;
        if ( nl >= min_leaf && nr >= min_leaf && x != last[j] )
        {
          double sl = left_sum[j], sr = total_sum - sl;
          double gain = sl * sl / nl + sr * sr / nr - parent_score[j];
          if ( better_gain( gain, best[j].feature < 0 ? 0.0 : best[j].gain ) )
          {
            best[j].feature = static_cast<int32_t>( f );
            best[j].threshold = midpoint( last[j], x );
            best[j].gain = gain;
          }
        }
        left_sum[j] += target[r];
        ++left_count[j];
        last[j] = x;
      }
    }
  }

  static RegressionTree to_preorder( std::vector<raw_node> const& raw )
  {
    RegressionTree t;
    std::vector<uint32_t> order;
    std::vector<uint32_t> todo{ 0 };
    std::vector<uint32_t> new_id( raw.size() );
    while ( !todo.empty() )
    {
      uint32_t r = todo.back();
      todo.pop_back();
      new_id[r] = static_cast<uint32_t>( order.size() );
      order.push_back( r );
      if ( raw[r].feature >= 0 )
      {
        todo.push_back( raw[r].right );
        todo.push_back( raw[r].left );
      }
    }
    for ( auto r : order )
    {
      auto const& n = raw[r];
      RegressionTree::Node out;
      out.feature = n.feature;
      out.threshold = n.threshold;
      out.value = n.value;
      if ( n.feature >= 0 )
      {
        out.left = new_id[n.left];
        out.right = new_id[n.right];
      }
      t.nodes.push_back( out );
    }
    return t;
  }

  std::vector<std::vector<double>> const& cols_;
  std::vector<std::vector<uint32_t>> const& sorted_;
  GbdtHyperparams const& hp_;
};

} // namespace detail

/*! \brief Stage-wise least-squares boosting.
 *
 * Stage m draws ceil(subsample * N) rows without replacement under
 * derive_seed(seed, m), fits a tree to the current residuals on those rows,
 * and adds learning_rate times its output to every row's prediction.
 */
inline GbdtModel fit( Dataset const& data, GbdtHyperparams const& hp )
{
  hp.validate();
  if ( data.size() < 2 )
    throw std::invalid_argument( "training needs at least two rows" );
  size_t n = data.size(), w = data.width();

  std::vector<std::vector<double>> cols( w, std::vector<double>( n ) );
  for ( size_t i = 0; i < n; ++i )
    for ( size_t f = 0; f < w; ++f )
      cols[f][i] = data.row( i )[f];
  std::vector<std::vector<uint32_t>> sorted( w, std::vector<uint32_t>( n ) );
  for ( size_t f = 0; f < w; ++f )
  {
    std::iota( sorted[f].begin(), sorted[f].end(), 0u );
    std::stable_sort( sorted[f].begin(), sorted[f].end(), [&]( uint32_t a, uint32_t b ) { return cols[f][a] < cols[f][b]; } );
  }

  std::vector<double> target = data.labels();
  if ( !hp.target_scale.empty() )
  {
    size_t col = GbdtModel::scale_column( data.header(), hp.target_scale );
    for ( size_t i = 0; i < n; ++i )
      target[i] /= std::max( 1.0, data.row( i )[col] );
  }
  // offset by the first label so that constant labels give an exact base
  double base = 0;
  for ( double y : target )
    base += y - target[0];
  base = target[0] + base / static_cast<double>( n );

  std::vector<double> pred( n, base ), residual( n );
  std::vector<RegressionTree> trees;
  trees.reserve( hp.n_estimators );
  detail::tree_builder builder( cols, sorted, hp );
  size_t m = static_cast<size_t>( std::ceil( hp.subsample * static_cast<double>( n ) ) );
  m = std::clamp<size_t>( m, 1, n );
  std::vector<uint32_t> perm( n );
  std::vector<double> row( w );

  for ( uint32_t stage = 0; stage < hp.n_estimators; ++stage )
  {
    for ( size_t i = 0; i < n; ++i )
      residual[i] = target[i] - pred[i];
    std::iota( perm.begin(), perm.end(), 0u );
    if ( m < n )
    {
      std::mt19937_64 rng( derive_seed( hp.seed, stage ) );
      for ( size_t i = 0; i < m; ++i )
      {
        std::uniform_int_distribution<size_t> pick( i, n - 1 );
        std::swap( perm[i], perm[pick( rng )] );
      }
    }
    std::vector<uint32_t> sample( perm.begin(), perm.begin() + m );
    std::sort( sample.begin(), sample.end() );
    auto tree = builder.build( residual, sample );
    for ( size_t i = 0; i < n; ++i )
      pred[i] += hp.learning_rate * tree.predict( data.row( i ) );
    trees.push_back( std::move( tree ) );
  }
  return GbdtModel( base, std::move( trees ), hp, data.header() );
}

struct ErrorStats
{
  double mean_abs_pct_error{ 0 };
  double max_abs_pct_error{ 0 };
  double std_abs_pct_error{ 0 };
  size_t count{ 0 };
};

struct AccuracyReport
{
  ErrorStats overall;
  std::map<std::string, ErrorStats> per_tag;
};

inline ErrorStats error_stats( std::vector<double> const& pct )
{
  ErrorStats s;
  s.count = pct.size();
  if ( pct.empty() )
    return s;
  for ( double e : pct )
  {
    s.mean_abs_pct_error += e;
    s.max_abs_pct_error = std::max( s.max_abs_pct_error, e );
  }
  s.mean_abs_pct_error /= static_cast<double>( pct.size() );
  double sq = 0;
  for ( double e : pct )
    sq += ( e - s.mean_abs_pct_error ) * ( e - s.mean_abs_pct_error );
  s.std_abs_pct_error = std::sqrt( sq / static_cast<double>( pct.size() ) );
  return s;
}

/*! \brief Absolute percentage errors |truth - prediction| / truth * 100, overall and per tag. */
inline AccuracyReport evaluate_predictions( std::vector<double> const& truth, std::vector<double> const& predicted,
                                            std::vector<std::string> const& tags )
{
  std::vector<double> all;
  std::map<std::string, std::vector<double>> by_tag;
  for ( size_t i = 0; i < truth.size(); ++i )
  {
    if ( !( truth[i] > 0 ) )
      throw std::invalid_argument( "percentage error needs positive labels" );
    double e = std::abs( truth[i] - predicted[i] ) / truth[i] * 100.0;
    all.push_back( e );
    by_tag[tags[i]].push_back( e );
  }
  AccuracyReport r;
  r.overall = error_stats( all );
  for ( auto const& [tag, v] : by_tag )
    r.per_tag[tag] = error_stats( v );
  return r;
}

inline AccuracyReport evaluate( GbdtModel const& model, Dataset const& data )
{
  std::vector<std::string> tags;
  for ( size_t i = 0; i < data.size(); ++i )
    tags.push_back( data.tag( i ) );
  return evaluate_predictions( data.labels(), model.predict_batch( data ), tags );
}

namespace detail
{

inline std::string hex_double( double v )
{
  char buf[64];
  auto [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), v, std::chars_format::hex );
  return std::string( buf, ptr );
}

inline double parse_hex_double( std::string const& s )
{
  double v{};
  char const* first = s.data();
  char const* last = s.data() + s.size();
  bool neg = !s.empty() && s[0] == '-';
  auto [ptr, ec] = std::from_chars( first + ( neg ? 1 : 0 ), last, v, std::chars_format::hex );
  if ( ec != std::errc{} || ptr != last )
    throw ModelError( "bad hex float '" + s + "'" );
  return neg ? -v : v;
}

} // namespace detail

inline constexpr char const* gbdt_format_magic = "aigopt-gbdt";
inline constexpr uint32_t gbdt_format_version = 1;

/*! \brief Versioned text form; all reals are hex floats so predictions survive a round trip bit for bit. */
inline std::string save_model( GbdtModel const& m )
{
  using detail::hex_double;
  std::ostringstream os;
  auto const& hp = m.hyperparams();
  os << gbdt_format_magic << ' ' << gbdt_format_version << '\n';
  os << "features " << m.feature_header().size();
  for ( auto const& h : m.feature_header() )
    os << ' ' << h;
  os << '\n';
  os << "learning_rate " << hex_double( hp.learning_rate ) << '\n';
  os << "max_depth " << hp.max_depth << '\n';
  os << "n_estimators " << hp.n_estimators << '\n';
  os << "subsample " << hex_double( hp.subsample ) << '\n';
  os << "min_samples_leaf " << hp.min_samples_leaf << '\n';
  os << "seed " << hp.seed << '\n';
  os << "target_scale " << ( hp.target_scale.empty() ? "none" : hp.target_scale ) << '\n';
  os << "base " << hex_double( m.base_prediction() ) << '\n';
  os << "trees " << m.trees().size() << '\n';
  for ( auto const& t : m.trees() )
  {
    os << "tree " << t.nodes.size() << '\n';
    for ( auto const& n : t.nodes )
    {
      if ( n.feature < 0 )
        os << "L " << hex_double( n.value ) << '\n';
      else
        os << "S " << n.feature << ' ' << hex_double( n.threshold ) << '\n';
    }
  }
  os << "end\n";
  return os.str();
}

/*! \brief Parses save_model() output; `expected_header`, when given, must match the stored feature names. */
inline GbdtModel load_model( std::string const& text, std::vector<std::string> const* expected_header = nullptr )
{
  std::istringstream is( text );
  auto expect = [&]( char const* key ) {
    std::string k;
    if ( !( is >> k ) )
      throw ModelError( std::string( "truncated model: missing '" ) + key + "'" );
    if ( k != key )
      throw ModelError( std::string( "expected '" ) + key + "', found '" + k + "'" );
  };
  auto read_word = [&]() {
    std::string w;
    if ( !( is >> w ) )
      throw ModelError( "truncated model" );
    return w;
  };
  auto read_uint = [&]() -> uint64_t {
    auto w = read_word();
    uint64_t v{};
    auto [ptr, ec] = std::from_chars( w.data(), w.data() + w.size(), v );
    if ( ec != std::errc{} || ptr != w.data() + w.size() )
      throw ModelError( "expected an unsigned integer, found '" + w + "'" );
    return v;
  };

  expect( gbdt_format_magic );
  auto version = read_uint();
  if ( version != gbdt_format_version )
    throw ModelError( "unsupported model version " + std::to_string( version ) );
  expect( "features" );
  std::vector<std::string> header( read_uint() );
  for ( auto& h : header )
    h = read_word();
  if ( expected_header && *expected_header != header )
    throw ModelError( "model feature header does not match the expected features" );

  GbdtHyperparams hp;
  expect( "learning_rate" );
  hp.learning_rate = detail::parse_hex_double( read_word() );
  expect( "max_depth" );
  hp.max_depth = static_cast<uint32_t>( read_uint() );
  expect( "n_estimators" );
  hp.n_estimators = static_cast<uint32_t>( read_uint() );
  expect( "subsample" );
  hp.subsample = detail::parse_hex_double( read_word() );
  expect( "min_samples_leaf" );
  hp.min_samples_leaf = static_cast<uint32_t>( read_uint() );
  expect( "seed" );
  hp.seed = read_uint();
  expect( "target_scale" );
  hp.target_scale = read_word();
  if ( hp.target_scale == "none" )
    hp.target_scale.clear();
  else if ( std::find( header.begin(), header.end(), hp.target_scale ) == header.end() )
    throw ModelError( "target scale column '" + hp.target_scale + "' is not a feature" );
  expect( "base" );
  double base = detail::parse_hex_double( read_word() );
  expect( "trees" );
  auto n_trees = read_uint();
  std::vector<RegressionTree> trees;
  for ( uint64_t t = 0; t < n_trees; ++t )
  {
    expect( "tree" );
    RegressionTree tree;
    tree.nodes.resize( read_uint() );
    if ( tree.nodes.empty() )
      throw ModelError( "empty tree" );
    // pre-order: children of split i are i+1 and the node after i's left subtree
    std::vector<uint32_t> open;
    for ( uint32_t i = 0; i < tree.nodes.size(); ++i )
    {
      auto kind = read_word();
      auto& n = tree.nodes[i];
      if ( kind == "L" )
      {
        n.value = detail::parse_hex_double( read_word() );
        if ( !std::isfinite( n.value ) )
          throw ModelError( "non-finite leaf value" );
      }
      else if ( kind == "S" )
      {
        n.feature = static_cast<int32_t>( read_uint() );
        if ( static_cast<size_t>( n.feature ) >= header.size() )
          throw ModelError( "split feature index out of range" );
        n.threshold = detail::parse_hex_double( read_word() );
        n.left = i + 1;
      }
      else
      {
        throw ModelError( "unknown node kind '" + kind + "'" );
      }
      if ( i > 0 )
      {
        if ( open.empty() )
          throw ModelError( "tree has more nodes than its structure allows" );
        auto& parent = tree.nodes[open.back()];
        if ( parent.left != i )
        {
          parent.right = i;
          open.pop_back();
        }
      }
      if ( n.feature >= 0 )
        open.push_back( i );
      else
      {
        // a finished leaf closes nothing; the next node is the right child of the innermost split still waiting
        while ( !open.empty() && tree.nodes[open.back()].right != 0 )
          open.pop_back();
      }
    }
    if ( !open.empty() )
      throw ModelError( "truncated tree" );
    trees.push_back( std::move( tree ) );
  }
  expect( "end" );
  return GbdtModel( base, std::move( trees ), hp, std::move( header ) );
}

} // namespace aigopt
