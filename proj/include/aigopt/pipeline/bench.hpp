/*!
  \file bench.hpp
  \brief Per-iteration stage timing of the three cost oracles
*/

#pragma once

#include "../features.hpp"
#include "../gbdt.hpp"
#include "../mapper.hpp"
#include "../optimizer.hpp"
#include "../transforms/catalog.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace aigopt
{

struct BenchConfig
{
  uint32_t iterations{ 1000 };
  uint32_t batches{ 10 };
  uint64_t seed{ 1 };

  void validate() const
  {
    if ( iterations < 1 || batches < 1 || batches > iterations )
      throw std::invalid_argument( "bench needs 1 <= batches <= iterations" );
  }
};

struct BenchRow
{
  std::string design;
  uint32_t nodes{ 0 };
  uint32_t iterations{ 0 };
  StageTimes per_iteration; //!< median over batches of the batch mean, seconds
  /*! \brief Relative change of ml inference time against mapping and STA time. */
  double ml_vs_mapping_pct{ 0 };
};

/*! \brief Times one move plus each oracle on a seeded random walk from `aig`.
 *
 * Graph processing covers the move and the level/node statistics; mapping and
 * STA covers ground truth; ml covers feature extraction and prediction.
 */
inline BenchRow bench_design( Aig const& aig, TransformCatalog const& catalog, CellLibrary const& lib, GbdtModel const& model, BenchConfig const& cfg,
                              FeatureConfig const& fcfg = {} )
{
  cfg.validate();
  std::vector<StageTimes> per( cfg.iterations );
  Aig cur = aig;
  double sink = 0;
  for ( uint32_t i = 0; i < cfg.iterations; ++i )
  {
    Stopwatch sw;
    auto m = random_move( catalog, cur, derive_seed( cfg.seed, i ) );
    auto st = compute_stats( m.result );
    per[i].graph_processing = sw.seconds();
    sink += st.level;

    Stopwatch map_sw;
    auto gt = ground_truth( m.result, lib );
    per[i].mapping_sta = map_sw.seconds();
    sink += gt.delay;

    Stopwatch ml_sw;
    auto row = extract_features( m.result, fcfg ).row();
    sink += model.predict( row );
    per[i].ml_inference = ml_sw.seconds();

    cur = std::move( m.result );
  }
  if ( !( sink == sink ) )
    throw std::logic_error( "non-finite oracle output" );

  auto median_of_means = [&]( double StageTimes::*field ) {
    std::vector<double> means;
    uint32_t per_batch = cfg.iterations / cfg.batches;
    for ( uint32_t b = 0; b < cfg.batches; ++b )
    {
      uint32_t lo = b * per_batch, hi = b + 1 == cfg.batches ? cfg.iterations : lo + per_batch;
      double s = 0;
      for ( uint32_t i = lo; i < hi; ++i )
        s += per[i].*field;
      means.push_back( s / ( hi - lo ) );
    }
    return detail::median( means );
  };

  BenchRow r;
  r.design = aig.name();
  r.nodes = aig.num_ands();
  r.iterations = cfg.iterations;
  r.per_iteration.graph_processing = median_of_means( &StageTimes::graph_processing );
  r.per_iteration.mapping_sta = median_of_means( &StageTimes::mapping_sta );
  r.per_iteration.ml_inference = median_of_means( &StageTimes::ml_inference );
  r.ml_vs_mapping_pct = r.per_iteration.mapping_sta > 0 ? 100.0 * ( r.per_iteration.ml_inference - r.per_iteration.mapping_sta ) / r.per_iteration.mapping_sta : 0.0;
  return r;
}

inline std::string bench_table( std::vector<BenchRow> const& rows )
{
  std::string out;
  char buf[256];
  std::snprintf( buf, sizeof( buf ), "%-14s %7s %7s %18s %16s %16s %10s\n", "design", "nodes", "iters", "graph_proc_ms", "mapping_sta_ms",
                 "ml_infer_ms", "ml_vs_map" );
  out += buf;
  for ( auto const& r : rows )
  {
    std::snprintf( buf, sizeof( buf ), "%-14s %7u %7u %18.4f %16.4f %16.4f %9.2f%%\n", r.design.c_str(), r.nodes, r.iterations,
                   r.per_iteration.graph_processing * 1e3, r.per_iteration.mapping_sta * 1e3, r.per_iteration.ml_inference * 1e3,
                   r.ml_vs_mapping_pct );
    out += buf;
  }
  return out;
}

inline nlohmann::ordered_json to_json( std::vector<BenchRow> const& rows )
{
  auto j = nlohmann::ordered_json::array();
  for ( auto const& r : rows )
    j.push_back( { { "design", r.design },
                   { "nodes", r.nodes },
                   { "iterations", r.iterations },
                   { "graph_processing_s", r.per_iteration.graph_processing },
                   { "mapping_sta_s", r.per_iteration.mapping_sta },
                   { "ml_inference_s", r.per_iteration.ml_inference },
                   { "ml_vs_mapping_pct", r.ml_vs_mapping_pct } } );
  return j;
}

} // namespace aigopt
