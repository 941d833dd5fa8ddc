#include <aigopt/aiger.hpp>
#include <aigopt/fixtures.hpp>
#include <aigopt/pipeline/bench.hpp>
#include <aigopt/pipeline/config.hpp>
#include <aigopt/pipeline/correlate.hpp>
#include <aigopt/pipeline/datagen.hpp>
#include <aigopt/pipeline/flow_report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace aigopt;
namespace fs = std::filesystem;

namespace
{

enum exit_code
{
  exit_ok = 0,
  exit_usage = 1,
  exit_data = 2,
  exit_internal = 3
};

struct global_options
{
  uint64_t seed{ 1 };
  bool seed_given{ false };
  std::string library;
  std::string config;
  std::string out{ "." };
  std::vector<std::string> moves;
};

/* bundled design name or AIGER path */
Aig load_design( std::string const& spec )
{
  for ( auto const& d : bundled_designs() )
    if ( d.name() == spec )
      return d;
  return read_aiger_file( spec );
}

std::vector<Aig> load_designs( std::vector<std::string> const& specs )
{
  std::vector<Aig> v;
  if ( specs.empty() )
    return bundled_designs();
  for ( auto const& s : specs )
    v.push_back( load_design( s ) );
  return v;
}

CorpusTable load_tables( std::vector<std::string> const& paths )
{
  CorpusTable t = read_dataset_file( paths.at( 0 ) );
  for ( size_t i = 1; i < paths.size(); ++i )
    t.append( read_dataset_file( paths[i] ) );
  return t;
}

GbdtModel load_model_file( std::string const& path )
{
  return load_model( read_text_file( path ) );
}

std::string accuracy_text( std::string const& label, AccuracyReport const& r )
{
  char buf[200];
  std::string out;
  std::snprintf( buf, sizeof( buf ), "%s: %zu rows, mean %.3f%%, max %.3f%%, std %.3f%%\n", label.c_str(), r.overall.count,
                 r.overall.mean_abs_pct_error, r.overall.max_abs_pct_error, r.overall.std_abs_pct_error );
  out += buf;
  for ( auto const& [tag, s] : r.per_tag )
  {
    std::snprintf( buf, sizeof( buf ), "  %-14s %6zu rows, mean %.3f%%, max %.3f%%\n", tag.c_str(), s.count, s.mean_abs_pct_error, s.max_abs_pct_error );
    out += buf;
  }
  return out;
}

nlohmann::ordered_json accuracy_json( AccuracyReport const& r )
{
  auto stats = []( ErrorStats const& s ) {
    return nlohmann::ordered_json{ { "count", s.count }, { "mean_abs_pct_error", s.mean_abs_pct_error }, { "max_abs_pct_error", s.max_abs_pct_error },
                                   { "std_abs_pct_error", s.std_abs_pct_error } };
  };
  nlohmann::ordered_json j;
  j["overall"] = stats( r.overall );
  for ( auto const& [tag, s] : r.per_tag )
    j["per_design"][tag] = stats( s );
  return j;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "AIG optimization under proxy, ground-truth and learned cost oracles" };
  app.require_subcommand( 0, 1 );
  app.fallthrough();
  global_options g;
  auto* seed_opt = app.add_option( "--seed", g.seed, "Global seed" );
  app.add_option( "--library", g.library, "Cell library file (default: built-in library)" );
  app.add_option( "--config", g.config, "JSON run configuration" );
  app.add_option( "-o,--out", g.out, "Output directory" );
  app.add_option( "--moves", g.moves, "Restrict the transform catalog to these entries" )->delimiter( ',' );
  bool list_moves = false;
  app.add_flag( "--list-transforms", list_moves, "Print the transform catalog and exit" );

  // datagen
  auto* datagen = app.add_subcommand( "datagen", "Generate and label a corpus per design" );
  std::vector<std::string> dg_designs;
  std::optional<uint32_t> dg_count;
  bool dg_cumulative = false, dg_no_dedup = false, dg_no_aigers = false;
  datagen->add_option( "designs", dg_designs, "Bundled design names or AIGER files (default: all bundled)" );
  datagen->add_option( "-n,--count", dg_count, "Unique AIGs per design" );
  datagen->add_flag( "--cumulative", dg_cumulative, "Continue sequences from the previous candidate" );
  datagen->add_flag( "--no-dedup", dg_no_dedup, "Keep duplicate AIGs" );
  datagen->add_flag( "--no-aigers", dg_no_aigers, "Do not write per-entry AIGER files" );

  // correlate
  auto* correlate_cmd = app.add_subcommand( "correlate", "Correlation of structure with delay, per design" );
  std::vector<std::string> co_datasets;
  double co_threshold = 0.05;
  correlate_cmd->add_option( "datasets", co_datasets, "Dataset files" )->required();
  correlate_cmd->add_option( "--threshold", co_threshold, "Relative delay gap for same-statistics groups" );

  // train
  auto* train = app.add_subcommand( "train", "Fit a GBDT model" );
  std::vector<std::string> tr_datasets, tr_held;
  std::string tr_model = "model.txt", tr_target = "delay";
  std::optional<std::string> tr_profile;
  train->add_option( "datasets", tr_datasets, "Dataset files" )->required();
  train->add_option( "--held-out", tr_held, "Designs excluded from training and reported separately" )->delimiter( ',' );
  train->add_option( "-m,--model", tr_model, "Model output path" );
  train->add_option( "--target", tr_target, "delay or area" );
  train->add_option( "--profile", tr_profile, "desk or paper hyperparameters" );

  // eval
  auto* eval = app.add_subcommand( "eval", "Accuracy of a model on datasets" );
  std::vector<std::string> ev_datasets, ev_held;
  std::string ev_model, ev_target = "delay";
  eval->add_option( "datasets", ev_datasets, "Dataset files" )->required();
  eval->add_option( "-m,--model", ev_model, "Model file" )->required();
  eval->add_option( "--held-out", ev_held, "Report these designs separately from the rest" )->delimiter( ',' );
  eval->add_option( "--target", ev_target, "delay or area" );

  // predict
  auto* predict = app.add_subcommand( "predict", "Predict delay for AIGs" );
  std::vector<std::string> pr_designs;
  std::string pr_model;
  predict->add_option( "designs", pr_designs, "Bundled design names or AIGER files" )->required();
  predict->add_option( "-m,--model", pr_model, "Model file" )->required();

  // optimize
  auto* optimize = app.add_subcommand( "optimize", "Annealing sweep per cost mode with ground-truth fronts" );
  std::string op_design, op_model, op_area_model;
  std::vector<std::string> op_modes{ "proxy", "ground-truth", "ml" };
  std::optional<uint32_t> op_iterations;
  optimize->add_option( "design", op_design, "Bundled design name or AIGER file" )->required();
  optimize->add_option( "--mode", op_modes, "Cost modes (proxy, ground-truth, ml)" )->delimiter( ',' );
  optimize->add_option( "-m,--model", op_model, "Delay model for the ml mode" );
  optimize->add_option( "--area-model", op_area_model, "Area model for the ml mode (default: node count)" );
  optimize->add_option( "--iterations", op_iterations, "Iterations per run" );

  // bench
  auto* bench = app.add_subcommand( "bench", "Per-iteration stage times of each oracle" );
  std::vector<std::string> be_designs;
  std::string be_model;
  std::optional<uint32_t> be_iterations;
  bench->add_option( "designs", be_designs, "Bundled design names or AIGER files (default: all bundled)" );
  bench->add_option( "-m,--model", be_model, "Delay model" )->required();
  bench->add_option( "--iterations", be_iterations, "Iterations per design" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    return app.exit( e ) == 0 ? exit_ok : exit_usage;
  }
  g.seed_given = seed_opt->count() > 0;
  if ( app.get_subcommands().empty() && !list_moves )
  {
    std::cerr << app.help();
    return exit_usage;
  }

  try
  {
    RunConfig cfg;
    if ( !g.config.empty() )
      cfg = parse_run_config( read_text_file( g.config ) );
    if ( g.seed_given )
      cfg.apply_seed( g.seed );
    auto lib = g.library.empty() ? CellLibrary::default_library() : read_library_file( g.library );
    auto catalog = TransformCatalog::standard();
    if ( !g.moves.empty() )
      catalog = catalog.subset( g.moves );
    if ( list_moves )
    {
      std::cout << catalog.listing();
      return exit_ok;
    }
    fs::path out = g.out;

    if ( *datagen )
    {
      if ( dg_count )
        cfg.datagen.count = *dg_count;
      cfg.datagen.cumulative = cfg.datagen.cumulative || dg_cumulative;
      cfg.datagen.dedup = cfg.datagen.dedup && !dg_no_dedup;
      for ( auto const& d : load_designs( dg_designs ) )
      {
        Stopwatch sw;
        auto corpus = generate_corpus( d, catalog, lib, cfg.datagen, cfg.features );
        write_corpus( corpus, catalog, out, !dg_no_aigers );
        if ( corpus.saturated )
          std::cerr << "warning: " << corpus.design << ": only " << corpus.entries.size() << " unique AIGs after " << corpus.attempts
                    << " candidates\n";
        std::printf( "%s: %zu AIGs in %.1f s -> %s\n", corpus.design.c_str(), corpus.entries.size(), sw.seconds(),
                     ( out / ( corpus.design + ".csv" ) ).string().c_str() );
      }
    }
    else if ( *correlate_cmd )
    {
      auto table = load_tables( co_datasets );
      auto j = nlohmann::ordered_json::array();
      for ( auto const& design : table.designs() )
      {
        CorpusTable part;
        part.feature_names = table.feature_names;
        for ( auto const& r : table.rows )
          if ( r.design == design )
            part.rows.push_back( r );
        auto rep = correlate( part, design, co_threshold );
        std::cout << to_text( rep ) << "\n";
        j.push_back( to_json( rep ) );
      }
      fs::create_directories( out );
      write_text_file( ( out / "correlation.json" ).string(), j.dump( 1 ) + "\n" );
    }
    else if ( *train )
    {
      auto target = parse_label_kind( tr_target );
      auto hp = target == label_kind::delay ? cfg.delay_model : cfg.area_model;
      if ( tr_profile )
      {
        auto scale = hp.target_scale;
        auto seed = hp.seed;
        if ( *tr_profile == "paper" )
          hp = GbdtHyperparams::paper();
        else if ( *tr_profile == "desk" )
          hp = GbdtHyperparams::desk();
        else
          throw DataError( "unknown profile '" + *tr_profile + "'" );
        hp.target_scale = scale;
        hp.seed = seed;
      }
      auto table = load_tables( tr_datasets );
      std::optional<TagSplit> split;
      if ( !tr_held.empty() )
        split = split_by_design( table, { tr_held.begin(), tr_held.end() } );
      auto train_data = to_dataset( split ? split->train : table, target );
      Stopwatch sw;
      auto model = fit( train_data, hp );
      double seconds = sw.seconds();
      fs::path model_path = tr_model;
      if ( model_path.has_parent_path() )
        fs::create_directories( model_path.parent_path() );
      write_text_file( model_path.string(), save_model( model ) );
      std::printf( "fit %zu rows x %zu features, %u trees in %.1f s -> %s\n", train_data.size(), train_data.width(), hp.n_estimators, seconds,
                   model_path.string().c_str() );
      std::cout << accuracy_text( "train", evaluate( model, train_data ) );
      if ( split )
        std::cout << accuracy_text( "held-out", evaluate( model, to_dataset( split->test, target ) ) );
    }
    else if ( *eval )
    {
      auto target = parse_label_kind( ev_target );
      auto model = load_model_file( ev_model );
      auto table = load_tables( ev_datasets );
      nlohmann::ordered_json j;
      if ( ev_held.empty() )
      {
        auto rep = evaluate( model, to_dataset( table, target ) );
        std::cout << accuracy_text( "all", rep );
        j["all"] = accuracy_json( rep );
      }
      else
      {
        auto split = split_by_design( table, { ev_held.begin(), ev_held.end() } );
        auto tr = evaluate( model, to_dataset( split.train, target ) );
        auto te = evaluate( model, to_dataset( split.test, target ) );
        std::cout << accuracy_text( "train", tr ) << accuracy_text( "held-out", te );
        j["train"] = accuracy_json( tr );
        j["held_out"] = accuracy_json( te );
      }
      fs::create_directories( out );
      write_text_file( ( out / "accuracy.json" ).string(), j.dump( 1 ) + "\n" );
    }
    else if ( *predict )
    {
      auto model = load_model_file( pr_model );
      if ( model.feature_header() != feature_header( cfg.features ) )
        throw DataError( "model features differ from the configured feature set" );
      for ( auto const& spec : pr_designs )
      {
        auto aig = load_design( spec );
        auto row = extract_features( aig, cfg.features ).row();
        std::cout << aig.name() << "," << format_double( model.predict( row ) ) << "\n";
      }
    }
    else if ( *optimize )
    {
      auto aig = load_design( op_design );
      if ( op_iterations )
        cfg.sa.iterations = *op_iterations;
      std::vector<cost_mode> modes;
      for ( auto const& m : op_modes )
        modes.push_back( parse_cost_mode( m ) );
      std::optional<GbdtModel> delay_model, area_model;
      auto header = feature_header( cfg.features );
      if ( !op_model.empty() )
        delay_model = load_model( read_text_file( op_model ), &header );
      if ( !op_area_model.empty() )
        area_model = load_model( read_text_file( op_area_model ), &header );
      if ( std::find( modes.begin(), modes.end(), cost_mode::ml ) != modes.end() && !delay_model )
        throw DataError( "ml mode needs --model" );
      OracleContext ctx{ &lib, delay_model ? &*delay_model : nullptr, area_model ? &*area_model : nullptr, cfg.features };
      auto report = compare_flows( aig, catalog, cfg.grid, cfg.sa, ctx, modes );
      write_flow_report( report, cfg.grid, out );
      std::cout << summary_text( report );
    }
    else if ( *bench )
    {
      if ( be_iterations )
        cfg.bench.iterations = *be_iterations;
      cfg.bench.validate();
      auto header = feature_header( cfg.features );
      auto model = load_model( read_text_file( be_model ), &header );
      std::vector<BenchRow> rows;
      for ( auto const& d : load_designs( be_designs ) )
        rows.push_back( bench_design( d, catalog, lib, model, cfg.bench, cfg.features ) );
      std::cout << bench_table( rows );
      fs::create_directories( out );
      write_text_file( ( out / "bench.json" ).string(), to_json( rows ).dump( 1 ) + "\n" );
    }
    return exit_ok;
  }
  catch ( DataError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( AigerError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( LibraryError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( ModelError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( MappingError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( std::invalid_argument const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( fs::filesystem_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}
