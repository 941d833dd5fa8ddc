/*!
  \file optimizer.hpp
  \brief Simulated annealing over the transform catalog with proxy, ground-truth, and learned cost oracles
*/

#pragma once

#include "aig.hpp"
#include "cell_library.hpp"
#include "features.hpp"
#include "gbdt.hpp"
#include "mapper.hpp"
#include "transforms/catalog.hpp"
#include "util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aigopt
{

enum class cost_mode : uint8_t
{
  proxy,
  ground_truth,
  ml
};

inline char const* cost_mode_name( cost_mode m )
{
  switch ( m )
  {
  case cost_mode::proxy: return "proxy";
  case cost_mode::ground_truth: return "ground-truth";
  case cost_mode::ml: return "ml";
  }
  return "?";
}

inline cost_mode parse_cost_mode( std::string const& s )
{
  if ( s == "proxy" || s == "baseline" )
    return cost_mode::proxy;
  if ( s == "ground-truth" || s == "gt" )
    return cost_mode::ground_truth;
  if ( s == "ml" )
    return cost_mode::ml;
  throw std::invalid_argument( "unknown cost mode '" + s + "'" );
}

struct CostConfig
{
  cost_mode mode{ cost_mode::proxy };
  double w_delay{ 1 };
  double w_area{ 1 };

  void validate() const
  {
    if ( !( w_delay >= 0 && w_area >= 0 && w_delay + w_area > 0 ) )
      throw std::invalid_argument( "cost weights must be non-negative with a positive sum" );
  }
};

struct SaConfig
{
  double initial_temp{ 0 }; //!< 0 selects the probe-based default
  double decay{ 0.99 };
  uint32_t iterations{ 2000 };
  uint64_t seed{ 1 };
  uint32_t probe_moves{ 100 };
  double probe_acceptance{ 0.8 };
  uint64_t probe_seed{ 1 }; //!< probe moves use their own stream so runs differing only in seed share a temperature

  void validate() const
  {
    if ( !( initial_temp >= 0 ) )
      throw std::invalid_argument( "initial_temp must be positive, or 0 for automatic" );
    if ( !( decay > 0 && decay < 1 ) )
      throw std::invalid_argument( "decay must be in (0, 1)" );
    if ( iterations < 1 )
      throw std::invalid_argument( "iterations must be at least 1" );
    if ( !( probe_acceptance > 0 && probe_acceptance < 1 ) )
      throw std::invalid_argument( "probe_acceptance must be in (0, 1)" );
  }
};

/*! \brief Wall time per evaluation, split into the three stages of a flow. */
struct StageTimes
{
  double graph_processing{ 0 }; //!< transform application and AIG statistics
  double mapping_sta{ 0 };
  double ml_inference{ 0 }; //!< feature extraction plus model evaluation

  StageTimes& operator+=( StageTimes const& o )
  {
    graph_processing += o.graph_processing;
    mapping_sta += o.mapping_sta;
    ml_inference += o.ml_inference;
    return *this;
  }
};

/*! \brief Read-only resources an oracle may need. */
struct OracleContext
{
  CellLibrary const* library{ nullptr };
  GbdtModel const* delay_model{ nullptr };
  GbdtModel const* area_model{ nullptr }; //!< ml mode uses node count for area when absent
  FeatureConfig features{};
};

struct Evaluation
{
  double cost{ 0 };
  double delay{ 0 }; //!< oracle's delay estimate, unnormalized
  double area{ 0 };  //!< oracle's area estimate, unnormalized
  StageTimes time;
};

/*! \brief Weighted sum of delay and area, each divided by its value on the run's initial AIG. */
class CostOracle
{
public:
  CostOracle( CostConfig cfg, OracleContext ctx, Aig const& initial ) : cfg_( cfg ), ctx_( ctx )
  {
    cfg_.validate();
    if ( cfg_.mode == cost_mode::ground_truth && !ctx_.library )
      throw std::invalid_argument( "ground-truth cost needs a cell library" );
    if ( cfg_.mode == cost_mode::ml && !ctx_.delay_model )
      throw std::invalid_argument( "ml cost needs a delay model" );
    auto [d, a, t] = raw( initial );
    (void)t;
    delay_ref_ = d > 0 ? d : 1.0;
    area_ref_ = a > 0 ? a : 1.0;
  }

  Evaluation evaluate( Aig const& aig ) const
  {
    auto [d, a, t] = raw( aig );
    return { cfg_.w_delay * d / delay_ref_ + cfg_.w_area * a / area_ref_, d, a, t };
  }

  CostConfig const& config() const { return cfg_; }

private:
  struct raw_metrics
  {
    double delay, area;
    StageTimes time;
  };

  raw_metrics raw( Aig const& aig ) const
  {
    raw_metrics r{ 0, 0, {} };
    Stopwatch sw;
    switch ( cfg_.mode )
    {
    case cost_mode::proxy:
    {
      auto s = compute_stats( aig );
      r.delay = s.level;
      r.area = s.node_count;
      r.time.graph_processing = sw.seconds();
      break;
    }
    case cost_mode::ground_truth:
    {
      auto gt = ground_truth( aig, *ctx_.library );
      r.delay = gt.delay;
      r.area = gt.area;
      r.time.mapping_sta = sw.seconds();
      break;
    }
    case cost_mode::ml:
    {
      auto row = extract_features( aig, ctx_.features ).row();
      r.delay = ctx_.delay_model->predict( row );
      r.area = ctx_.area_model ? ctx_.area_model->predict( row ) : static_cast<double>( aig.num_ands() );
      r.time.ml_inference = sw.seconds();
      break;
    }
    }
    return r;
  }

  CostConfig cfg_;
  OracleContext ctx_;
  double delay_ref_{ 1 };
  double area_ref_{ 1 };
};

/*! \brief Metropolis rule: improvements always pass, a worsening `delta` passes with probability exp(-delta / t). */
template<typename Rng>
bool accept_move( double delta, double temperature, Rng& rng )
{
  std::uniform_real_distribution<double> u( 0.0, 1.0 );
  double draw = u( rng );
  if ( delta <= 0 )
    return true;
  if ( !( temperature > 0 ) )
    return false;
  return draw < std::exp( -delta / temperature );
}

struct TrajectoryPoint
{
  uint32_t iteration{ 0 };
  uint32_t transform_id{ 0 };
  double temperature{ 0 };
  double candidate_cost{ 0 };
  bool accepted{ false };
  double current_cost{ 0 };
  double best_cost{ 0 };
  StageTimes time;
};

struct SaRun
{
  CostConfig cost;
  SaConfig sa;
  double initial_temp{ 0 }; //!< temperature actually used at iteration 0
  Aig best_aig;
  uint32_t best_iteration{ 0 }; //!< 0 when the initial AIG stays best
  Evaluation best_estimate;
  GroundTruth best_truth;
  std::vector<TrajectoryPoint> trajectory;
  double probe_seconds{ 0 };
};

namespace detail
{

inline double median( std::vector<double> v )
{
  if ( v.empty() )
    return 0;
  std::sort( v.begin(), v.end() );
  size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : ( v[m - 1] + v[m] ) / 2;
}

} // namespace detail

/*! \brief Initial temperature that accepts the median |delta| of `probe_moves` one-step moves with probability `probe_acceptance`. */
inline double probe_temperature( Aig const& initial, TransformCatalog const& catalog, CostOracle const& oracle, SaConfig const& sa )
{
  double base = oracle.evaluate( initial ).cost;
  std::vector<double> deltas, nonzero;
  for ( uint32_t i = 0; i < sa.probe_moves; ++i )
  {
    auto move = random_move( catalog, initial, derive_seed( derive_seed( sa.probe_seed, 1 ), i ) );
    double d = std::abs( oracle.evaluate( move.result ).cost - base );
    deltas.push_back( d );
    if ( d > 0 )
      nonzero.push_back( d );
  }
  double m = detail::median( deltas );
  if ( m == 0 )
    m = nonzero.empty() ? 1e-3 : detail::median( nonzero );
  return m / std::log( 1.0 / sa.probe_acceptance );
}

/*! \brief One annealing run.
 *
 * Iteration i applies a uniformly drawn catalog entry to the current AIG,
 * scores it with the oracle, accepts it by the Metropolis rule at the current
 * temperature, and multiplies the temperature by `decay`.  The best AIG by
 * oracle cost is re-scored with the ground-truth oracle when a library is
 * available.
 */
inline SaRun anneal( Aig const& initial, TransformCatalog const& catalog, CostConfig const& cost, SaConfig const& sa, OracleContext const& ctx,
                     std::function<void( TrajectoryPoint const&, Aig const& candidate )> const& observer = {} )
{
  sa.validate();
  CostOracle oracle( cost, ctx, initial );
  SaRun run;
  run.cost = cost;
  run.sa = sa;

  Stopwatch probe_sw;
  double temp = sa.initial_temp > 0 ? sa.initial_temp : probe_temperature( initial, catalog, oracle, sa );
  run.probe_seconds = sa.initial_temp > 0 ? 0.0 : probe_sw.seconds();
  run.initial_temp = temp;

  Aig current = initial;
  Evaluation cur = oracle.evaluate( initial );
  run.best_aig = initial;
  run.best_estimate = cur;
  std::mt19937_64 accept_rng( derive_seed( sa.seed, 2 ) );
  uint64_t move_stream = derive_seed( sa.seed, 0 );

  run.trajectory.reserve( sa.iterations );
  for ( uint32_t it = 1; it <= sa.iterations; ++it )
  {
    Stopwatch sw;
    auto move = random_move( catalog, current, derive_seed( move_stream, it ) );
    double transform_time = sw.seconds();
    auto ev = oracle.evaluate( move.result );
    ev.time.graph_processing += transform_time;

    bool ok = accept_move( ev.cost - cur.cost, temp, accept_rng );
    if ( observer )
      observer( { it, move.transform_id, temp, ev.cost, ok, ok ? ev.cost : cur.cost, std::min( run.best_estimate.cost, ok ? ev.cost : cur.cost ), ev.time },
                move.result );
    if ( ok )
    {
      current = std::move( move.result );
      cur = ev;
      if ( cur.cost < run.best_estimate.cost )
      {
        run.best_aig = current;
        run.best_estimate = cur;
        run.best_iteration = it;
      }
    }
    run.trajectory.push_back( { it, move.transform_id, temp, ev.cost, ok, cur.cost, run.best_estimate.cost, ev.time } );
    temp *= sa.decay;
  }
  if ( ctx.library )
    run.best_truth = ground_truth( run.best_aig, *ctx.library );
  return run;
}

/*! \brief Delay and area weights, as a ratio w_delay:w_area. */
struct WeightRatio
{
  double w_delay{ 1 };
  double w_area{ 1 };
};

struct SweepGrid
{
  std::vector<WeightRatio> weights;
  std::vector<double> decays;
  std::vector<uint64_t> seeds;

  /*! \brief Ratios 4:1 to 1:4, decays 0.95/0.99/0.999, seeds 1..3. */
  static SweepGrid standard()
  {
    return { { { 4, 1 }, { 2, 1 }, { 1, 1 }, { 1, 2 }, { 1, 4 } }, { 0.95, 0.99, 0.999 }, { 1, 2, 3 } };
  }

  size_t size() const { return weights.size() * decays.size() * seeds.size(); }
};

/*! \brief Configuration of grid point `index` (weights outermost, seeds innermost). */
struct GridPoint
{
  WeightRatio weights;
  double decay;
  uint64_t seed; //!< derived, distinct per grid point
};

inline GridPoint grid_point( SweepGrid const& grid, size_t index )
{
  size_t ns = grid.seeds.size(), nd = grid.decays.size();
  size_t s = index % ns, d = ( index / ns ) % nd, w = index / ( ns * nd );
  return { grid.weights[w], grid.decays[d], derive_seed( grid.seeds[s], index ) };
}

/*! \brief One anneal per grid point, in grid order; `base` supplies iterations and probe settings. */
inline std::vector<SaRun> sweep( Aig const& initial, TransformCatalog const& catalog, SweepGrid const& grid, cost_mode mode, SaConfig const& base,
                                 OracleContext const& ctx )
{
  if ( grid.size() == 0 )
    throw std::invalid_argument( "sweep grid is empty" );
  double probe_time = 0;
  std::vector<SaRun> runs;
  std::vector<double> temps( grid.weights.size(), base.initial_temp );
  for ( size_t i = 0; i < grid.size(); ++i )
  {
    auto gp = grid_point( grid, i );
    size_t w = i / ( grid.seeds.size() * grid.decays.size() );
    CostConfig cost{ mode, gp.weights.w_delay, gp.weights.w_area };
    SaConfig sa = base;
    sa.decay = gp.decay;
    sa.seed = gp.seed;
    // the automatic temperature depends only on the weights, so it is probed once per ratio
    if ( temps[w] <= 0 )
    {
      Stopwatch sw;
      temps[w] = probe_temperature( initial, catalog, CostOracle( cost, ctx, initial ), sa );
      probe_time = sw.seconds();
    }
    sa.initial_temp = temps[w];
    runs.push_back( anneal( initial, catalog, cost, sa, ctx ) );
    runs.back().sa.initial_temp = base.initial_temp;
    runs.back().probe_seconds = std::exchange( probe_time, 0.0 );
  }
  return runs;
}

struct FrontPoint
{
  double delay{ 0 };
  double area{ 0 };
  size_t source{ 0 }; //!< index of the run or input point
};

/*! \brief Non-dominated points sorted by delay ascending, area strictly descending; exact duplicates keep the first. */
inline std::vector<FrontPoint> pareto_front( std::vector<FrontPoint> points )
{
  std::stable_sort( points.begin(), points.end(), []( FrontPoint const& a, FrontPoint const& b ) {
    if ( a.delay != b.delay )
      return a.delay < b.delay;
    return a.area < b.area;
  } );
  std::vector<FrontPoint> front;
  for ( auto const& p : points )
    if ( front.empty() || p.area < front.back().area )
      front.push_back( p );
  return front;
}

/*! \brief Front of the runs' ground-truth metrics. */
inline std::vector<FrontPoint> pareto_front( std::vector<SaRun> const& runs )
{
  std::vector<FrontPoint> pts;
  for ( size_t i = 0; i < runs.size(); ++i )
    pts.push_back( { runs[i].best_truth.delay, runs[i].best_truth.area, i } );
  return pareto_front( std::move( pts ) );
}

/*! \brief Area dominated by `front` inside the box bounded by the reference point. */
inline double hypervolume( std::vector<FrontPoint> const& front, double ref_delay, double ref_area )
{
  auto f = pareto_front( front );
  double hv = 0;
  for ( size_t i = 0; i < f.size(); ++i )
  {
    if ( f[i].delay >= ref_delay || f[i].area >= ref_area )
      continue;
    double right = i + 1 < f.size() ? std::min( f[i + 1].delay, ref_delay ) : ref_delay;
    hv += ( right - f[i].delay ) * ( ref_area - f[i].area );
  }
  return hv;
}

struct FlowResult
{
  cost_mode mode{ cost_mode::proxy };
  std::vector<SaRun> runs;
  std::vector<FrontPoint> front;
  double hypervolume{ 0 };
  StageTimes mean_iteration_time;
};

struct FlowReport
{
  std::string design;
  size_t grid_size{ 0 };
  uint32_t iterations{ 0 };
  double ref_delay{ 0 };
  double ref_area{ 0 };
  GroundTruth initial;
  std::vector<FlowResult> flows;

  FlowResult const& flow( cost_mode m ) const
  {
    for ( auto const& f : flows )
      if ( f.mode == m )
        return f;
    throw std::out_of_range( "flow not in report" );
  }
};

/*! \brief Runs every requested mode over the same grid and seeds and scores all fronts by ground truth.
 *
 * The hypervolume reference point is 1.1 times the largest delay and area over
 * the union of all fronts in the report.
 */
inline FlowReport compare_flows( Aig const& initial, TransformCatalog const& catalog, SweepGrid const& grid, SaConfig const& base,
                                 OracleContext const& ctx, std::vector<cost_mode> const& modes = { cost_mode::proxy, cost_mode::ground_truth, cost_mode::ml } )
{
  if ( !ctx.library )
    throw std::invalid_argument( "flow comparison needs a cell library" );
  FlowReport r;
  r.design = initial.name();
  r.grid_size = grid.size();
  r.iterations = base.iterations;
  r.initial = ground_truth( initial, *ctx.library );
  for ( auto m : modes )
  {
    FlowResult f;
    f.mode = m;
    f.runs = sweep( initial, catalog, grid, m, base, ctx );
    f.front = pareto_front( f.runs );
    double n = 0;
    for ( auto const& run : f.runs )
      for ( auto const& p : run.trajectory )
      {
        f.mean_iteration_time += p.time;
        n += 1;
      }
    if ( n > 0 )
    {
      f.mean_iteration_time.graph_processing /= n;
      f.mean_iteration_time.mapping_sta /= n;
      f.mean_iteration_time.ml_inference /= n;
    }
    r.flows.push_back( std::move( f ) );
  }
  for ( auto const& f : r.flows )
    for ( auto const& p : f.front )
    {
      r.ref_delay = std::max( r.ref_delay, p.delay );
      r.ref_area = std::max( r.ref_area, p.area );
    }
  r.ref_delay *= 1.1;
  r.ref_area *= 1.1;
  for ( auto& f : r.flows )
    f.hypervolume = hypervolume( f.front, r.ref_delay, r.ref_area );
  return r;
}

} // namespace aigopt
