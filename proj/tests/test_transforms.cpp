#include "test_support.hpp"

#include <aigopt/equivalence.hpp>
#include <aigopt/fixtures.hpp>
#include <aigopt/transforms/catalog.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace aigopt;
using namespace aigopt::test;

namespace
{

bool equivalent( Aig const& a, Aig const& b )
{
  return check_equivalence( a, b ).status == equivalence_status::exact_equivalent;
}

std::string slurp( std::string const& path )
{
  std::ifstream in( path );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Aig and_chain( uint32_t n )
{
  AigBuilder b;
  Edge acc = b.create_pi();
  for ( uint32_t i = 1; i < n; ++i )
    acc = b.create_and( acc, b.create_pi() );
  b.create_po( acc );
  return b.build();
}

std::vector<Aig> random_fixtures()
{
  std::vector<Aig> v;
  for ( uint64_t s = 0; s < 40; ++s )
    v.push_back( random_aig( 4 + s % 8, 20 + 5 * s, 1 + s % 4, 900 + s ) );
  return v;
}

} // namespace

TEST_CASE( "balance flattens a chain" )
{
  auto aig = and_chain( 4 );
  REQUIRE( compute_stats( aig ) == AigStats{ 3, 3 } );
  auto out = balance( aig );
  CHECK( compute_stats( out ) == AigStats{ 3, 2 } );
  CHECK( equivalent( aig, out ) );

  auto wide = and_chain( 16 );
  CHECK( compute_stats( balance( wide ) ) == AigStats{ 15, 4 } );
}

TEST_CASE( "complement pushdown without sites is the identity" )
{
  auto aig = and_chain( 6 );
  for ( uint64_t s = 0; s < 5; ++s )
    CHECK( emit_aiger( complement_pushdown( aig, s ) ) == emit_aiger( aig ) );
}

TEST_CASE( "complement pushdown keeps the node count" )
{
  for ( auto const& aig : random_fixtures() )
    for ( uint64_t s = 0; s < 3; ++s )
    {
      auto out = complement_pushdown( aig, s );
      CHECK( out.num_ands() == aig.num_ands() );
      CHECK( equivalent( aig, out ) );
    }
}

TEST_CASE( "every primitive preserves function" )
{
  auto catalog = TransformCatalog::standard();
  auto fixtures = random_fixtures();
  fixtures.push_back( load_data( "eight_gate.aag" ) );
  fixtures.push_back( load_data( "diamond.aag" ) );
  for ( auto const& aig : fixtures )
    for ( auto const& t : catalog.entries() )
    {
      auto out = apply( t, aig, 17 );
      INFO( t.name );
      CHECK( validate( out ).empty() );
      CHECK( out.num_pis() == aig.num_pis() );
      CHECK( out.num_pos() == aig.num_pos() );
      CHECK( equivalent( aig, out ) );
    }
}

TEST_CASE( "rewrite and refactor never add nodes" )
{
  for ( auto const& aig : random_fixtures() )
    for ( uint64_t s = 0; s < 3; ++s )
    {
      CHECK( rewrite( aig, {}, s ).num_ands() <= aig.num_ands() );
      CHECK( rewrite( aig, RewriteParams{ true }, s ).num_ands() <= aig.num_ands() );
      CHECK( refactor( aig, {}, s ).num_ands() <= aig.num_ands() );
      CHECK( strash( aig ).num_ands() <= aig.num_ands() );
    }
}

TEST_CASE( "random move sequences stay equivalent" )
{
  auto catalog = TransformCatalog::standard();
  auto reference = load_data( "eight_gate.aag" );
  auto current = reference;
  for ( uint64_t i = 0; i < 1000; ++i )
  {
    current = random_move( catalog, current, derive_seed( 99, i ) ).result;
    REQUIRE( equivalent( reference, current ) );
  }

  reference = make_priority_encoder();
  current = reference;
  for ( uint64_t i = 0; i < 100; ++i )
  {
    current = random_move( catalog, current, derive_seed( 7, i ) ).result;
    REQUIRE( equivalent( reference, current ) );
  }
}

TEST_CASE( "move selection is uniform over the catalog" )
{
  auto catalog = TransformCatalog::standard();
  auto aig = and_chain( 3 );
  uint32_t const trials = 21000;
  std::vector<uint32_t> counts( catalog.size(), 0 );
  for ( uint32_t i = 0; i < trials; ++i )
    ++counts[random_move( catalog, aig, derive_seed( 5, i ) ).transform_id];
  double p = 1.0 / catalog.size();
  double sigma = std::sqrt( trials * p * ( 1 - p ) );
  for ( auto c : counts )
    CHECK( std::abs( c - trials * p ) <= 3 * sigma );
}

TEST_CASE( "transforms are deterministic under a seed" )
{
  auto catalog = TransformCatalog::standard();
  auto aig = make_adder_tree();
  for ( auto const& t : catalog.entries() )
    CHECK( emit_aiger( apply( t, aig, 3 ) ) == emit_aiger( apply( t, aig, 3 ) ) );
  auto a = random_move( catalog, aig, 11 ), b = random_move( catalog, aig, 11 );
  CHECK( a.transform_id == b.transform_id );
  CHECK( emit_aiger( a.result ) == emit_aiger( b.result ) );
}

TEST_CASE( "the catalog contains node and level reducers" )
{
  auto catalog = TransformCatalog::standard();
  CHECK( catalog.size() == 21 );
  for ( auto const& aig : bundled_designs() )
  {
    auto before = compute_stats( aig );
    bool fewer_nodes = false, lower_level = false;
    for ( auto const& t : catalog.entries() )
    {
      auto after = compute_stats( apply( t, aig, 1 ) );
      fewer_nodes = fewer_nodes || after.node_count < before.node_count;
      lower_level = lower_level || after.level < before.level;
    }
    CHECK( fewer_nodes );
    CHECK( lower_level );
  }
}

TEST_CASE( "catalog lookup" )
{
  auto catalog = TransformCatalog::standard();
  auto sub = catalog.subset( { "cpush", "balance" } );
  REQUIRE( sub.size() == 2 );
  CHECK( sub[0].name == "cpush" );
  CHECK( sub[1].id == 1 );
  CHECK_THROWS_AS( catalog.find( "nope" ), std::invalid_argument );
  CHECK_THROWS_AS( TransformCatalog( {} ), std::invalid_argument );
  CHECK( catalog.listing().find( "rewrite:zero-gain" ) != std::string::npos );
}

TEST_CASE( "bundled benchmark files match the generators" )
{
  std::vector<std::pair<std::string, Aig>> files{ { "mult_slice.aag", make_multiplier_slice() },
                                                  { "adder_tree.aag", make_adder_tree() },
                                                  { "priority_enc.aag", make_priority_encoder() },
                                                  { "random_cone.aag", make_random_cone() } };
  for ( auto const& [file, aig] : files )
  {
    INFO( file );
    CHECK( slurp( std::string( AIGOPT_BENCHMARKS ) + "/" + file ) == emit_aiger( aig ) );
  }
}
