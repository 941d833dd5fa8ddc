/*!
  \file config.hpp
  \brief Run configuration with JSON overrides
*/

#pragma once

#include "../features.hpp"
#include "../gbdt.hpp"
#include "../optimizer.hpp"
#include "bench.hpp"
#include "datagen.hpp"
#include "dataset_file.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace aigopt
{

/*! \brief Settings of every command; `seed` feeds all generators that are not given their own seed. */
struct RunConfig
{
  uint64_t seed{ 1 };
  FeatureConfig features;
  DatagenConfig datagen;
  GbdtHyperparams delay_model = delay_model_defaults();
  GbdtHyperparams area_model = area_model_defaults();
  SaConfig sa;
  SweepGrid grid = SweepGrid::standard();
  bool grid_seeds_given{ false };
  BenchConfig bench;

  static GbdtHyperparams delay_model_defaults()
  {
    auto hp = GbdtHyperparams::desk();
    hp.target_scale = "aig_level";
    return hp;
  }

  static GbdtHyperparams area_model_defaults()
  {
    auto hp = GbdtHyperparams::desk();
    hp.target_scale = "number_of_node";
    return hp;
  }

  /*! \brief Propagates the global seed; grid seeds become seed, seed+1, ... unless set explicitly. */
  void apply_seed( uint64_t s )
  {
    seed = s;
    datagen.seed = s;
    delay_model.seed = s;
    area_model.seed = s;
    sa.probe_seed = s;
    bench.seed = s;
    if ( !grid_seeds_given )
      for ( size_t i = 0; i < grid.seeds.size(); ++i )
        grid.seeds[i] = s + i;
  }

  void validate() const
  {
    datagen.validate();
    delay_model.validate();
    area_model.validate();
    sa.validate();
    bench.validate();
    if ( grid.size() == 0 )
      throw std::invalid_argument( "sweep grid is empty" );
    for ( auto d : grid.decays )
      if ( !( d > 0 && d < 1 ) )
        throw std::invalid_argument( "grid decays must be in (0, 1)" );
  }
};

namespace detail
{

using json = nlohmann::json;

inline void check_keys( json const& j, std::string const& where, std::set<std::string> const& allowed )
{
  if ( !j.is_object() )
    throw DataError( "config: '" + where + "' must be an object" );
  for ( auto const& [k, v] : j.items() )
    if ( !allowed.count( k ) )
      throw DataError( "config: unknown key '" + k + "' in '" + where + "'" );
}

template<typename T>
void read_key( json const& j, char const* key, T& out )
{
  if ( j.contains( key ) )
    out = j.at( key ).get<T>();
}

inline GbdtHyperparams read_gbdt( json const& j, std::string const& where, GbdtHyperparams hp )
{
  check_keys( j, where, { "profile", "learning_rate", "max_depth", "n_estimators", "subsample", "min_samples_leaf", "seed", "target_scale" } );
  if ( j.contains( "profile" ) )
  {
    auto p = j.at( "profile" ).get<std::string>();
    auto scale = hp.target_scale;
    auto seed = hp.seed;
    if ( p == "desk" )
      hp = GbdtHyperparams::desk();
    else if ( p == "paper" )
      hp = GbdtHyperparams::paper();
    else
      throw DataError( "config: unknown gbdt profile '" + p + "'" );
    hp.target_scale = scale;
    hp.seed = seed;
  }
  read_key( j, "learning_rate", hp.learning_rate );
  read_key( j, "max_depth", hp.max_depth );
  read_key( j, "n_estimators", hp.n_estimators );
  read_key( j, "subsample", hp.subsample );
  read_key( j, "min_samples_leaf", hp.min_samples_leaf );
  read_key( j, "seed", hp.seed );
  read_key( j, "target_scale", hp.target_scale );
  return hp;
}

} // namespace detail

/*! \brief Overrides fields of `base` from a JSON document; unknown keys are rejected. */
inline RunConfig parse_run_config( std::string const& text, RunConfig base = {} )
{
  using detail::json;
  using detail::read_key;
  json j;
  try
  {
    j = json::parse( text );
  }
  catch ( json::parse_error const& e )
  {
    throw DataError( std::string( "config: " ) + e.what() );
  }
  try
  {
    detail::check_keys( j, "top level", { "seed", "features", "datagen", "gbdt", "area_gbdt", "sa", "grid", "bench" } );
    if ( j.contains( "seed" ) )
      base.apply_seed( j.at( "seed" ).get<uint64_t>() );
    if ( j.contains( "features" ) )
    {
      auto const& f = j.at( "features" );
      detail::check_keys( f, "features", { "n_depth", "n_paths" } );
      read_key( f, "n_depth", base.features.n_depth );
      read_key( f, "n_paths", base.features.n_paths );
    }
    if ( j.contains( "datagen" ) )
    {
      auto const& d = j.at( "datagen" );
      detail::check_keys( d, "datagen", { "count", "min_seq", "max_seq", "dedup", "cumulative", "max_attempts" } );
      read_key( d, "count", base.datagen.count );
      read_key( d, "min_seq", base.datagen.min_seq );
      read_key( d, "max_seq", base.datagen.max_seq );
      read_key( d, "dedup", base.datagen.dedup );
      read_key( d, "cumulative", base.datagen.cumulative );
      read_key( d, "max_attempts", base.datagen.max_attempts );
    }
    if ( j.contains( "gbdt" ) )
      base.delay_model = detail::read_gbdt( j.at( "gbdt" ), "gbdt", base.delay_model );
    if ( j.contains( "area_gbdt" ) )
      base.area_model = detail::read_gbdt( j.at( "area_gbdt" ), "area_gbdt", base.area_model );
    if ( j.contains( "sa" ) )
    {
      auto const& s = j.at( "sa" );
      detail::check_keys( s, "sa", { "initial_temp", "decay", "iterations", "probe_moves", "probe_acceptance" } );
      read_key( s, "initial_temp", base.sa.initial_temp );
      read_key( s, "decay", base.sa.decay );
      read_key( s, "iterations", base.sa.iterations );
      read_key( s, "probe_moves", base.sa.probe_moves );
      read_key( s, "probe_acceptance", base.sa.probe_acceptance );
    }
    if ( j.contains( "grid" ) )
    {
      auto const& g = j.at( "grid" );
      detail::check_keys( g, "grid", { "weights", "decays", "seeds" } );
      if ( g.contains( "weights" ) )
      {
        base.grid.weights.clear();
        for ( auto const& w : g.at( "weights" ) )
        {
          auto pair = w.get<std::vector<double>>();
          if ( pair.size() != 2 )
            throw DataError( "config: grid weights are [w_delay, w_area] pairs" );
          base.grid.weights.push_back( { pair[0], pair[1] } );
        }
      }
      read_key( g, "decays", base.grid.decays );
      if ( g.contains( "seeds" ) )
      {
        base.grid.seeds = g.at( "seeds" ).get<std::vector<uint64_t>>();
        base.grid_seeds_given = true;
      }
    }
    if ( j.contains( "bench" ) )
    {
      auto const& b = j.at( "bench" );
      detail::check_keys( b, "bench", { "iterations", "batches" } );
      read_key( b, "iterations", base.bench.iterations );
      read_key( b, "batches", base.bench.batches );
    }
  }
  catch ( json::exception const& e )
  {
    throw DataError( std::string( "config: " ) + e.what() );
  }
  try
  {
    base.validate();
  }
  catch ( std::invalid_argument const& e )
  {
    throw DataError( std::string( "config: " ) + e.what() );
  }
  return base;
}

} // namespace aigopt
