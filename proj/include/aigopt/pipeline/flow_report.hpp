/*!
  \file flow_report.hpp
  \brief Serialization of flow comparison results
*/

#pragma once

#include "../aiger.hpp"
#include "../optimizer.hpp"
#include "dataset_file.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

namespace aigopt
{

/*! \brief Relative path of the best AIG of run `run` in flow `mode`. */
inline std::string run_aiger_path( cost_mode mode, size_t run )
{
  char buf[32];
  std::snprintf( buf, sizeof( buf ), "_%03zu.aag", run );
  return std::string( "best/" ) + cost_mode_name( mode ) + buf;
}

/*! \brief Every non-timing field of the report: grid, per-run results, fronts and hypervolumes. */
inline nlohmann::ordered_json to_json( FlowReport const& r, SweepGrid const& grid )
{
  nlohmann::ordered_json j;
  j["design"] = r.design;
  j["grid_size"] = r.grid_size;
  j["iterations"] = r.iterations;
  j["initial"] = { { "delay", r.initial.delay }, { "area", r.initial.area } };
  j["reference_point"] = { { "delay", r.ref_delay }, { "area", r.ref_area } };
  auto& flows = j["flows"] = nlohmann::ordered_json::array();
  for ( auto const& f : r.flows )
  {
    nlohmann::ordered_json fj;
    fj["mode"] = cost_mode_name( f.mode );
    fj["hypervolume"] = f.hypervolume;
    auto& front = fj["front"] = nlohmann::ordered_json::array();
    for ( auto const& p : f.front )
      front.push_back( { { "delay", p.delay }, { "area", p.area }, { "run", p.source }, { "aiger", run_aiger_path( f.mode, p.source ) } } );
    auto& runs = fj["runs"] = nlohmann::ordered_json::array();
    for ( size_t i = 0; i < f.runs.size(); ++i )
    {
      auto const& run = f.runs[i];
      auto gp = grid_point( grid, i );
      runs.push_back( { { "run", i },
                        { "w_delay", gp.weights.w_delay },
                        { "w_area", gp.weights.w_area },
                        { "decay", gp.decay },
                        { "seed", hex64( run.sa.seed ) },
                        { "initial_temp", run.initial_temp },
                        { "best_iteration", run.best_iteration },
                        { "best_cost", run.best_estimate.cost },
                        { "estimated_delay", run.best_estimate.delay },
                        { "estimated_area", run.best_estimate.area },
                        { "delay", run.best_truth.delay },
                        { "area", run.best_truth.area },
                        { "nodes", run.best_aig.num_ands() },
                        { "level", compute_stats( run.best_aig ).level } } );
    }
    flows.push_back( std::move( fj ) );
  }
  return j;
}

/*! \brief Mean per-iteration stage times per flow, seconds. */
inline nlohmann::ordered_json timing_json( FlowReport const& r )
{
  nlohmann::ordered_json j;
  j["design"] = r.design;
  for ( auto const& f : r.flows )
  {
    double probe = 0;
    for ( auto const& run : f.runs )
      probe += run.probe_seconds;
    j[cost_mode_name( f.mode )] = { { "graph_processing_s", f.mean_iteration_time.graph_processing },
                                    { "mapping_sta_s", f.mean_iteration_time.mapping_sta },
                                    { "ml_inference_s", f.mean_iteration_time.ml_inference },
                                    { "temperature_probe_s", probe } };
  }
  return j;
}

/*! \brief Header `mode,run,iteration,transform,temperature,candidate_cost,accepted,current_cost,best_cost`. */
inline std::string trajectory_csv( FlowReport const& r )
{
  std::string out = "mode,run,iteration,transform,temperature,candidate_cost,accepted,current_cost,best_cost\n";
  for ( auto const& f : r.flows )
    for ( size_t i = 0; i < f.runs.size(); ++i )
      for ( auto const& p : f.runs[i].trajectory )
      {
        out += std::string( cost_mode_name( f.mode ) ) + "," + std::to_string( i ) + "," + std::to_string( p.iteration ) + "," +
               std::to_string( p.transform_id ) + "," + format_double( p.temperature ) + "," + format_double( p.candidate_cost ) + "," +
               ( p.accepted ? "1" : "0" ) + "," + format_double( p.current_cost ) + "," + format_double( p.best_cost ) + "\n";
      }
  return out;
}

/*! \brief Header `mode,delay,area,aiger`, one row per front point. */
inline std::string front_csv( FlowReport const& r )
{
  std::string out = "mode,delay,area,aiger\n";
  for ( auto const& f : r.flows )
    for ( auto const& p : f.front )
      out += std::string( cost_mode_name( f.mode ) ) + "," + format_double( p.delay ) + "," + format_double( p.area ) + "," +
             run_aiger_path( f.mode, p.source ) + "\n";
  return out;
}

inline std::string summary_text( FlowReport const& r )
{
  std::string out;
  char buf[256];
  std::snprintf( buf, sizeof( buf ), "design %s: %zu runs x %u iterations per flow, initial delay %.4f area %.2f\n", r.design.c_str(),
                 r.grid_size, r.iterations, r.initial.delay, r.initial.area );
  out += buf;
  std::snprintf( buf, sizeof( buf ), "%-14s %12s %8s %12s %12s %18s %16s %16s\n", "flow", "hypervolume", "front", "best_delay", "best_area",
                 "graph_proc_ms/it", "mapping_ms/it", "ml_ms/it" );
  out += buf;
  for ( auto const& f : r.flows )
  {
    double bd = f.front.empty() ? 0 : f.front.front().delay, ba = f.front.empty() ? 0 : f.front.back().area;
    std::snprintf( buf, sizeof( buf ), "%-14s %12.4f %8zu %12.4f %12.2f %18.4f %16.4f %16.4f\n", cost_mode_name( f.mode ), f.hypervolume,
                   f.front.size(), bd, ba, f.mean_iteration_time.graph_processing * 1e3, f.mean_iteration_time.mapping_sta * 1e3,
                   f.mean_iteration_time.ml_inference * 1e3 );
    out += buf;
  }
  return out;
}

/*! \brief Writes report.json, timing.json, summary.txt, trajectories.csv, front.csv and the best AIG of every front point. */
inline void write_flow_report( FlowReport const& r, SweepGrid const& grid, std::filesystem::path const& dir )
{
  std::filesystem::create_directories( dir / "best" );
  write_text_file( ( dir / "report.json" ).string(), to_json( r, grid ).dump( 1 ) + "\n" );
  write_text_file( ( dir / "timing.json" ).string(), timing_json( r ).dump( 1 ) + "\n" );
  write_text_file( ( dir / "summary.txt" ).string(), summary_text( r ) );
  write_text_file( ( dir / "trajectories.csv" ).string(), trajectory_csv( r ) );
  write_text_file( ( dir / "front.csv" ).string(), front_csv( r ) );
  for ( auto const& f : r.flows )
    for ( auto const& p : f.front )
      write_text_file( ( dir / run_aiger_path( f.mode, p.source ) ).string(), emit_aiger( f.runs[p.source].best_aig ) );
}

} // namespace aigopt
