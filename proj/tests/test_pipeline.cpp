#include "test_support.hpp"

#include <aigopt/fixtures.hpp>
#include <aigopt/pipeline/bench.hpp>
#include <aigopt/pipeline/config.hpp>
#include <aigopt/pipeline/correlate.hpp>
#include <aigopt/pipeline/datagen.hpp>
#include <aigopt/pipeline/flow_report.hpp>

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

using namespace aigopt;
using namespace aigopt::test;
using Catch::Approx;

namespace
{

CellLibrary const& library()
{
  static CellLibrary lib = CellLibrary::default_library();
  return lib;
}

DatagenConfig small_datagen( uint32_t count, uint64_t seed = 3 )
{
  DatagenConfig cfg;
  cfg.count = count;
  cfg.seed = seed;
  return cfg;
}

Corpus const& eight_gate_corpus()
{
  static Corpus c = generate_corpus( load_data( "eight_gate.aag" ), TransformCatalog::standard(), library(), small_datagen( 200 ) );
  return c;
}

/* table with the given level column and labels, other features random */
CorpusTable synthetic_table( std::vector<double> const& level, std::vector<double> const& delay )
{
  CorpusTable t;
  t.feature_names = feature_header();
  std::mt19937_64 rng( 1 );
  std::uniform_real_distribution<double> u( 0, 1 );
  for ( size_t i = 0; i < level.size(); ++i )
  {
    std::vector<double> row( t.feature_names.size() );
    for ( auto& v : row )
      v = u( rng );
    row[t.column( "aig_level" )] = level[i];
    row[t.column( "number_of_node" )] = 10;
    t.rows.push_back( { "syn", row, delay[i], 1.0 } );
  }
  return t;
}

std::filesystem::path scratch( std::string const& name )
{
  auto p = std::filesystem::temp_directory_path() / ( "aigopt_test_" + name );
  std::filesystem::remove_all( p );
  return p;
}

} // namespace

TEST_CASE( "dataset files round trip byte for byte" )
{
  auto text = write_dataset( eight_gate_corpus().table() );
  auto parsed = parse_dataset( text );
  CHECK( write_dataset( parsed ) == text );
  REQUIRE( parsed.rows.size() == eight_gate_corpus().entries.size() );
  for ( size_t i = 0; i < parsed.rows.size(); ++i )
  {
    CHECK( parsed.rows[i].features == eight_gate_corpus().entries[i].features );
    CHECK( parsed.rows[i].delay == eight_gate_corpus().entries[i].truth.delay );
  }

  CorpusTable t;
  t.feature_names = { "a" };
  t.rows.push_back( { "d", { 0.1 }, 1.0 / 3.0, 1e-300 } );
  t.rows.push_back( { "d", { -0.0 }, 123456789.125, 5e300 } );
  CHECK( write_dataset( parse_dataset( write_dataset( t ) ) ) == write_dataset( t ) );
  CHECK( parse_dataset( write_dataset( t ) ).rows[0].delay == 1.0 / 3.0 );
}

TEST_CASE( "dataset parse errors" )
{
  CHECK_THROWS_AS( parse_dataset( "" ), DataError );
  CHECK_THROWS_AS( parse_dataset( "name,a,delay,area\n" ), DataError );
  CHECK_THROWS_AS( parse_dataset( "design,a,delay,area\nx,1,2\n" ), DataError );
  CHECK_THROWS_WITH( parse_dataset( "design,a,delay,area\nx,1,2,3\nx,1,zz,3\n" ), Catch::Matchers::ContainsSubstring( "line 3" ) );
  CorpusTable bad;
  bad.feature_names = { "a" };
  bad.rows.push_back( { "x,y", { 1 }, 1, 1 } );
  CHECK_THROWS_AS( write_dataset( bad ), DataError );
  CHECK_THROWS_AS( read_dataset_file( "/nonexistent/file.csv" ), DataError );
}

TEST_CASE( "a single-entry corpus is the source itself" )
{
  auto src = load_data( "eight_gate.aag" );
  auto c = generate_corpus( src, TransformCatalog::standard(), library(), small_datagen( 1 ) );
  REQUIRE( c.entries.size() == 1 );
  CHECK( c.entries[0].sequence.empty() );
  CHECK( c.entries[0].features == extract_features( src ).row() );
  auto gt = ground_truth( src, library() );
  CHECK( c.entries[0].truth.delay == gt.delay );
  CHECK( c.entries[0].truth.area == gt.area );
  CHECK_FALSE( c.saturated );
}

TEST_CASE( "eight-gate corpus shows structural ambiguity" )
{
  auto const& c = eight_gate_corpus();
  std::set<uint64_t> hashes;
  std::map<std::pair<double, double>, std::set<double>> delays;
  auto t = c.table();
  size_t lc = t.column( "aig_level" ), nc = t.column( "number_of_node" );
  for ( size_t i = 0; i < c.entries.size(); ++i )
  {
    CHECK( hashes.insert( c.entries[i].hash ).second );
    CHECK( c.entries[i].sequence.size() >= ( i ? 2u : 0u ) );
    CHECK( c.entries[i].sequence.size() <= 20u );
    delays[{ t.rows[i].features[lc], t.rows[i].features[nc] }].insert( t.rows[i].delay );
  }
  CHECK( delays.size() >= 2 );
  bool ambiguous = std::any_of( delays.begin(), delays.end(), []( auto const& kv ) { return kv.second.size() >= 2; } );
  CHECK( ambiguous );
}

TEST_CASE( "datagen is deterministic and reproducible from its files" )
{
  auto catalog = TransformCatalog::standard();
  auto src = make_priority_encoder();
  auto a = generate_corpus( src, catalog, library(), small_datagen( 40 ) );
  auto b = generate_corpus( src, catalog, library(), small_datagen( 40 ) );
  CHECK( write_dataset( a.table() ) == write_dataset( b.table() ) );
  CHECK( corpus_manifest( a, catalog ).dump() == corpus_manifest( b, catalog ).dump() );
  auto other = generate_corpus( src, catalog, library(), small_datagen( 40, 4 ) );
  CHECK( write_dataset( other.table() ) != write_dataset( a.table() ) );

  auto dir = scratch( "datagen" );
  write_corpus( a, catalog, dir );
  auto manifest = nlohmann::json::parse( read_text_file( ( dir / "priority_enc.manifest.json" ).string() ) );
  REQUIRE( manifest["entries"].size() == a.entries.size() );
  auto table = read_dataset_file( ( dir / "priority_enc.csv" ).string() );
  for ( size_t i = 0; i < a.entries.size(); ++i )
  {
    auto const& e = manifest["entries"][i];
    auto aig = read_aiger_file( ( dir / e["aiger"].get<std::string>() ).string() );
    auto row = extract_features( aig ).row();
    CHECK( row == e["features"].get<std::vector<double>>() );
    CHECK( row == table.rows[i].features );
    CHECK( ground_truth( aig, library() ).delay == e["delay"].get<double>() );
    CHECK( fnv1a64( emit_aiger( aig ) ) == a.entries[i].hash );
  }
  std::filesystem::remove_all( dir );
}

TEST_CASE( "datagen modes and saturation" )
{
  auto catalog = TransformCatalog::standard();
  AigBuilder b;
  b.create_po( b.create_and( b.create_pi(), b.create_pi() ) );
  auto tiny = b.build( "tiny" );
  auto cfg = small_datagen( 50 );
  cfg.max_attempts = 30;
  auto c = generate_corpus( tiny, catalog, library(), cfg );
  CHECK( c.saturated );
  CHECK( c.entries.size() < 50 );
  CHECK( c.attempts == 30 );

  cfg.dedup = false;
  auto dup = generate_corpus( tiny, catalog, library(), cfg );
  CHECK( dup.entries.size() == 31 );

  auto cum = small_datagen( 30 );
  cum.cumulative = true;
  auto cc = generate_corpus( make_adder_tree(), catalog, library(), cum );
  CHECK( cc.entries.size() == 30 );
  for ( auto const& e : cc.entries )
    CHECK( e.aig.num_pis() == 18 );

  DatagenConfig bad;
  bad.min_seq = 5;
  bad.max_seq = 4;
  CHECK_THROWS_AS( bad.validate(), std::invalid_argument );
  bad = DatagenConfig{};
  bad.count = 0;
  CHECK_THROWS_AS( bad.validate(), std::invalid_argument );
}

TEST_CASE( "pearson examples" )
{
  std::vector<double> x{ 1, 2, 3, 4 }, y{ 2, 4, 6, 8 }, z{ 8, 6, 4, 2 }, c{ 1, 1, 1, 1 };
  CHECK( *pearson( x, y ) == Approx( 1.0 ) );
  CHECK( *pearson( x, z ) == Approx( -1.0 ) );
  CHECK_FALSE( pearson( x, c ).has_value() );
  CHECK_FALSE( pearson( std::vector<double>{ 1 }, std::vector<double>{ 2 } ).has_value() );
  CHECK_THROWS( pearson( x, std::vector<double>{ 1, 2 } ) );
}

TEST_CASE( "correlation report on synthetic tables" )
{
  std::mt19937_64 rng( 8 );
  std::vector<double> level, delay;
  for ( int i = 0; i < 1000; ++i )
  {
    level.push_back( double( 5 + rng() % 30 ) );
    delay.push_back( 2 * level.back() );
  }
  auto exact = correlate( synthetic_table( level, delay ), "syn" );
  CHECK( *exact.level_delay == Approx( 1.0 ) );
  CHECK_FALSE( exact.min_delay_not_min_level );

  auto permuted = delay;
  std::shuffle( permuted.begin(), permuted.end(), rng );
  auto indep = correlate( synthetic_table( level, permuted ), "syn" );
  CHECK( std::abs( *indep.level_delay ) < 0.2 );

  // zero-variance delay is reported as undefined
  auto flat = correlate( synthetic_table( level, std::vector<double>( 1000, 3.0 ) ) );
  CHECK_FALSE( flat.level_delay.has_value() );
  CHECK( to_text( flat ).find( "undefined" ) != std::string::npos );
  CHECK( to_json( flat )["level_delay_pearson"].is_null() );

  CHECK_THROWS_AS( correlate( synthetic_table( { 1, 2 }, { 1, 2 } ) ), DataError );
}

TEST_CASE( "same-statistics pairs" )
{
  std::vector<double> level( 40, 4 ), delay( 40, 1.0 );
  level[7] = 3;
  delay[7] = 1.5;
  delay[20] = 1.2;
  delay[30] = 0.9;
  auto r = correlate( synthetic_table( level, delay ) );
  REQUIRE( r.widest_pair );
  CHECK( r.widest_pair->fast == 30 );
  CHECK( r.widest_pair->slow == 20 );
  CHECK( r.widest_pair->relative_difference == Approx( 0.3 / 0.9 ) );
  CHECK( r.min_delay_row == 30 );
  CHECK( r.min_level_row == 7 );
  CHECK( r.min_delay_not_min_level );
  CHECK( r.stat_groups == 2 );
  CHECK( r.groups_over_threshold == 1 );
}

TEST_CASE( "design split" )
{
  auto t = eight_gate_corpus().table();
  auto other = eight_gate_corpus().table();
  for ( auto& r : other.rows )
    r.design = "copy";
  t.append( other );
  auto s = split_by_design( t, { "copy" } );
  CHECK( s.train.rows.size() == other.rows.size() );
  CHECK( s.test.rows.size() == other.rows.size() );
  for ( auto const& r : s.train.rows )
    CHECK( r.design != "copy" );
  for ( auto const& r : s.test.rows )
    CHECK( r.design == "copy" );
  CHECK_THROWS_AS( split_by_design( t, {} ), DataError );
  CHECK_THROWS_AS( split_by_design( t, { "copy", "eight_gate" } ), DataError );
  CorpusTable wrong;
  wrong.feature_names = { "x" };
  CHECK_THROWS_AS( t.append( wrong ), DataError );
}

TEST_CASE( "train, evaluate and predict plumbing" )
{
  auto catalog = TransformCatalog::standard();
  auto a = generate_corpus( make_priority_encoder(), catalog, library(), small_datagen( 150 ) ).table();
  auto b = generate_corpus( make_adder_tree(), catalog, library(), small_datagen( 150 ) ).table();
  a.append( b );
  auto split = split_by_design( a, { "adder_tree" } );
  auto hp = RunConfig::delay_model_defaults();
  hp.n_estimators = 100;
  auto model = fit( to_dataset( split.train ), hp );
  auto train_err = evaluate( model, to_dataset( split.train ) ).overall.mean_abs_pct_error;
  auto test_err = evaluate( model, to_dataset( split.test ) ).overall.mean_abs_pct_error;
  CHECK( train_err < test_err );

  auto reloaded = load_model( save_model( model ) );
  for ( auto const& r : split.train.rows )
    CHECK( reloaded.predict( r.features ) == model.predict( r.features ) );

  auto area = to_dataset( split.train, label_kind::area );
  CHECK( area.label( 0 ) == split.train.rows[0].area );
  CHECK( parse_label_kind( "area" ) == label_kind::area );
  CHECK_THROWS_AS( parse_label_kind( "power" ), DataError );
}

TEST_CASE( "bench report structure" )
{
  auto catalog = TransformCatalog::standard();
  Dataset d( feature_header() );
  auto base = make_priority_encoder();
  for ( uint64_t i = 0; i < 20; ++i )
  {
    auto m = random_move( catalog, base, i ).result;
    d.add( extract_features( m ).row(), ground_truth( m, library() ).delay );
  }
  auto model = fit( d, GbdtHyperparams{ 0.1, 3, 10, 1.0, 2, 1, {} } );

  AigBuilder b;
  b.create_po( b.create_pi() );
  auto identity = b.build( "identity" );
  BenchConfig cfg{ 50, 5, 1 };
  auto row = bench_design( identity, catalog, library(), model, cfg );
  CHECK( row.nodes == 0 );
  CHECK( row.iterations == 50 );
  CHECK( row.per_iteration.graph_processing < 1e-3 );
  CHECK( row.per_iteration.mapping_sta < 1e-3 );
  CHECK( row.per_iteration.ml_inference < 1e-3 );
  auto table = bench_table( { row } );
  CHECK( table.find( "graph_proc_ms" ) != std::string::npos );
  CHECK( table.find( "mapping_sta_ms" ) != std::string::npos );
  CHECK( table.find( "ml_infer_ms" ) != std::string::npos );
  CHECK( to_json( std::vector<BenchRow>{ row } )[0]["design"] == "identity" );
  CHECK_THROWS_AS( bench_design( identity, catalog, library(), model, BenchConfig{ 5, 10, 1 } ), std::invalid_argument );
}

TEST_CASE( "run configuration overrides" )
{
  auto cfg = parse_run_config( R"({"seed": 7, "datagen": {"count": 12, "cumulative": true},
    "gbdt": {"profile": "paper", "max_depth": 4}, "sa": {"iterations": 9},
    "grid": {"weights": [[1, 2]], "decays": [0.9]}, "bench": {"iterations": 100}})" );
  CHECK( cfg.datagen.count == 12 );
  CHECK( cfg.datagen.cumulative );
  CHECK( cfg.datagen.seed == 7 );
  CHECK( cfg.delay_model.n_estimators == 5000 );
  CHECK( cfg.delay_model.max_depth == 4 );
  CHECK( cfg.delay_model.target_scale == "aig_level" );
  CHECK( cfg.delay_model.seed == 7 );
  CHECK( cfg.sa.iterations == 9 );
  CHECK( cfg.grid.size() == 3 );
  CHECK( cfg.grid.seeds == std::vector<uint64_t>{ 7, 8, 9 } );
  CHECK( cfg.bench.iterations == 100 );

  auto explicit_seeds = parse_run_config( R"({"seed": 7, "grid": {"seeds": [4]}})" );
  CHECK( explicit_seeds.grid.seeds == std::vector<uint64_t>{ 4 } );

  CHECK( RunConfig{}.grid.size() == 45 );
  CHECK( RunConfig{}.sa.iterations == 2000 );
  CHECK_THROWS_AS( parse_run_config( "{" ), DataError );
  CHECK_THROWS_AS( parse_run_config( R"({"colour": 1})" ), DataError );
  CHECK_THROWS_AS( parse_run_config( R"({"sa": {"decay": 2}})" ), DataError );
  CHECK_THROWS_AS( parse_run_config( R"({"gbdt": {"profile": "huge"}})" ), DataError );
  CHECK_THROWS_AS( parse_run_config( R"({"datagen": {"count": "many"}})" ), DataError );
}

TEST_CASE( "flow report artifacts are deterministic" )
{
  auto aig = load_data( "eight_gate.aag" );
  SweepGrid grid{ { { 1, 1 }, { 2, 1 } }, { 0.9 }, { 1, 2 } };
  SaConfig sa;
  sa.iterations = 15;
  sa.probe_moves = 10;
  OracleContext ctx{ &library(), nullptr, nullptr, {} };
  auto catalog = TransformCatalog::standard();
  std::vector<cost_mode> modes{ cost_mode::proxy, cost_mode::ground_truth };
  auto r1 = compare_flows( aig, catalog, grid, sa, ctx, modes );
  auto r2 = compare_flows( aig, catalog, grid, sa, ctx, modes );
  CHECK( to_json( r1, grid ).dump() == to_json( r2, grid ).dump() );
  CHECK( trajectory_csv( r1 ) == trajectory_csv( r2 ) );
  CHECK( front_csv( r1 ) == front_csv( r2 ) );
  CHECK( trajectory_csv( r1 ).find( "time" ) == std::string::npos );

  auto j = to_json( r1, grid );
  CHECK( j["flows"].size() == 2 );
  CHECK( j["flows"][0]["runs"].size() == 4 );
  CHECK( j["flows"][1]["mode"] == "ground-truth" );

  auto dir = scratch( "flow" );
  write_flow_report( r1, grid, dir );
  for ( auto const& f : r1.flows )
    for ( auto const& p : f.front )
    {
      auto best = read_aiger_file( ( dir / run_aiger_path( f.mode, p.source ) ).string() );
      CHECK( ground_truth( best, library() ).delay == p.delay );
    }
  CHECK( std::filesystem::exists( dir / "timing.json" ) );
  CHECK( read_text_file( ( dir / "summary.txt" ).string() ).find( "hypervolume" ) != std::string::npos );
  std::filesystem::remove_all( dir );
}
