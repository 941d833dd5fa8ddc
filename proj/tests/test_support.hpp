#pragma once

#include <aigopt/aig.hpp>
#include <aigopt/aiger.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace aigopt::test
{

inline Aig load_data( std::string const& file )
{
  return read_aiger_file( std::string( AIGOPT_TEST_DATA ) + "/" + file );
}

inline Aig load_benchmark( std::string const& file )
{
  return read_aiger_file( std::string( AIGOPT_BENCHMARKS ) + "/" + file );
}

/* random AIG with `num_ands` requested gates over a sliding window of recent signals */
inline Aig random_aig( uint32_t num_pis, uint32_t num_ands, uint32_t num_pos, uint64_t seed, uint32_t window = 12 )
{
  std::mt19937_64 rng( seed );
  AigBuilder b;
  std::vector<Edge> sig;
  for ( uint32_t i = 0; i < num_pis; ++i )
    sig.push_back( b.create_pi() );
  for ( uint32_t i = 0; i < num_ands; ++i )
  {
    uint32_t lo = sig.size() > window ? static_cast<uint32_t>( sig.size() ) - window : 0;
    std::uniform_int_distribution<uint32_t> pick( lo, static_cast<uint32_t>( sig.size() ) - 1 );
    Edge x = sig[pick( rng )] ^ ( rng() & 1 ), y = sig[pick( rng )] ^ ( rng() & 1 );
    sig.push_back( b.create_and( x, y ) );
  }
  for ( uint32_t i = 0; i < num_pos; ++i )
    b.create_po( sig[sig.size() - 1 - i] ^ ( rng() & 1 ) );
  return b.build( "random" );
}

/* plain recursive evaluation of one PO under one assignment */
inline bool eval_recursive( Aig const& aig, Edge e, std::vector<bool> const& pis )
{
  bool v;
  node_id n = e.node();
  if ( aig.is_constant( n ) )
    v = false;
  else if ( aig.is_pi( n ) )
    v = pis[n - 1];
  else
    v = eval_recursive( aig, aig.fanin0( n ), pis ) && eval_recursive( aig, aig.fanin1( n ), pis );
  return v != e.complemented();
}

inline std::vector<bool> assignment( uint32_t num_pis, uint64_t m )
{
  std::vector<bool> v( num_pis );
  for ( uint32_t i = 0; i < num_pis; ++i )
    v[i] = ( m >> i ) & 1u;
  return v;
}

/* every PI-to-root path as a node list, PI first */
inline void enumerate_paths( Aig const& aig, node_id n, std::vector<node_id>& suffix, std::function<void( std::vector<node_id> const& )> const& fn )
{
  suffix.push_back( n );
  if ( aig.is_and( n ) )
  {
    enumerate_paths( aig, aig.fanin0( n ).node(), suffix, fn );
    enumerate_paths( aig, aig.fanin1( n ).node(), suffix, fn );
  }
  else
  {
    std::vector<node_id> path( suffix.rbegin(), suffix.rend() );
    fn( path );
  }
  suffix.pop_back();
}

} // namespace aigopt::test
