/*!
  \file util.hpp
  \brief Seed derivation, hashing, number formatting, timing
*/

#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace aigopt
{

inline uint64_t splitmix64( uint64_t x )
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

/*! \brief Independent child seed for stream `index` of `parent`. */
inline uint64_t derive_seed( uint64_t parent, uint64_t index )
{
  return splitmix64( splitmix64( parent ) ^ ( index * 0xd1b54a32d192ed03ull ) );
}

inline uint64_t fnv1a64( std::string_view data )
{
  uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char c : data )
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64( uint64_t v )
{
  char buf[17];
  auto [ptr, ec] = std::to_chars( buf, buf + 16, v, 16 );
  std::string s( buf, ptr );
  return std::string( 16 - s.size(), '0' ) + s;
}

/*! \brief Shortest decimal text that parses back to exactly `v`. */
inline std::string format_double( double v )
{
  char buf[64];
  auto [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), v );
  return std::string( buf, ptr );
}

inline double parse_double( std::string_view s )
{
  double v{};
  auto [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
  if ( ec != std::errc{} || ptr != s.data() + s.size() )
  {
    throw std::invalid_argument( "not a number: '" + std::string( s ) + "'" );
  }
  return v;
}

class Stopwatch
{
public:
  Stopwatch() : start_( std::chrono::steady_clock::now() ) {}
  double seconds() const { return std::chrono::duration<double>( std::chrono::steady_clock::now() - start_ ).count(); }
  void restart() { start_ = std::chrono::steady_clock::now(); }

private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace aigopt
