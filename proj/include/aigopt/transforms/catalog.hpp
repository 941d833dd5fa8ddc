/*!
  \file catalog.hpp
  \brief Registered transformation scripts and the random move generator
*/

#pragma once

#include "../aig.hpp"
#include "../util.hpp"
#include "balance.hpp"
#include "complement.hpp"
#include "refactor.hpp"
#include "rewrite.hpp"
#include "strash.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aigopt
{

enum class primitive : uint8_t
{
  balance,
  rewrite,
  refactor,
  strash,
  complement_pushdown
};

inline char const* primitive_name( primitive p )
{
  switch ( p )
  {
  case primitive::balance: return "balance";
  case primitive::rewrite: return "rewrite";
  case primitive::refactor: return "refactor";
  case primitive::strash: return "strash";
  case primitive::complement_pushdown: return "cpush";
  }
  return "?";
}

/*! \brief One primitive invocation.
 *
 * `flag` is duplication for balance and zero-gain acceptance for rewrite and
 * refactor; `param` is the refactor cone input limit (0 means 8).
 */
struct Step
{
  primitive op;
  bool flag{ false };
  uint8_t param{ 0 };
};

struct Transform
{
  uint32_t id{ 0 };
  std::string name;
  std::vector<Step> steps;
};

inline Aig apply_step( Step const& step, Aig const& aig, uint64_t seed )
{
  switch ( step.op )
  {
  case primitive::balance:
    return balance( aig, BalanceParams{ step.flag }, seed );
  case primitive::rewrite:
    return rewrite( aig, RewriteParams{ step.flag }, seed );
  case primitive::refactor:
    return refactor( aig, RefactorParams{ step.param == 0 ? 8u : step.param, 3u, step.flag }, seed );
  case primitive::strash:
    return strash( aig );
  case primitive::complement_pushdown:
    return complement_pushdown( aig, seed );
  }
  return aig;
}

/*! \brief Applies every step of `t` in order; step i draws its randomness from derive_seed(seed, i). */
inline Aig apply( Transform const& t, Aig const& aig, uint64_t seed )
{
  Aig current = aig;
  for ( size_t i = 0; i < t.steps.size(); ++i )
  {
    current = apply_step( t.steps[i], current, derive_seed( seed, i ) );
  }
  return current;
}

class TransformCatalog
{
public:
  explicit TransformCatalog( std::vector<Transform> entries ) : entries_( std::move( entries ) )
  {
    if ( entries_.empty() )
      throw std::invalid_argument( "transform catalog must not be empty" );
    for ( uint32_t i = 0; i < entries_.size(); ++i )
      entries_[i].id = i;
  }

  /*! \brief Five primitives, their parameter variants, and fixed scripts of two to four steps. */
  static TransformCatalog standard()
  {
    using P = primitive;
    auto b = Step{ P::balance }, bd = Step{ P::balance, true };
    auto rw = Step{ P::rewrite }, rwz = Step{ P::rewrite, true };
    auto rf = Step{ P::refactor }, rfz = Step{ P::refactor, true }, rf6 = Step{ P::refactor, false, 6 };
    auto st = Step{ P::strash }, cp = Step{ P::complement_pushdown };
    return TransformCatalog( {
        { 0, "balance", { b } },
        { 0, "balance-dup", { bd } },
        { 0, "rewrite", { rw } },
        { 0, "rewrite-z", { rwz } },
        { 0, "refactor", { rf } },
        { 0, "refactor-z", { rfz } },
        { 0, "refactor-k6", { rf6 } },
        { 0, "strash", { st } },
        { 0, "cpush", { cp } },
        { 0, "balance;rewrite", { b, rw } },
        { 0, "rewrite;balance", { rw, b } },
        { 0, "rewrite-z;balance", { rwz, b } },
        { 0, "rewrite;refactor;balance", { rw, rf, b } },
        { 0, "refactor;balance", { rf, b } },
        { 0, "balance;refactor", { b, rf } },
        { 0, "cpush;balance", { cp, b } },
        { 0, "rewrite-z;cpush;refactor-z", { rwz, cp, rfz } },
        { 0, "balance-dup;rewrite", { bd, rw } },
        { 0, "refactor;rewrite;balance;rewrite-z", { rf, rw, b, rwz } },
        { 0, "strash;balance;rewrite", { st, b, rw } },
        { 0, "cpush;rewrite-z", { cp, rwz } },
    } );
  }

  /*! \brief Sub-catalog of the named entries, in the given order. */
  TransformCatalog subset( std::vector<std::string> const& names ) const
  {
    std::vector<Transform> picked;
    for ( auto const& n : names )
      picked.push_back( find( n ) );
    return TransformCatalog( std::move( picked ) );
  }

  Transform const& find( std::string const& name ) const
  {
    for ( auto const& t : entries_ )
      if ( t.name == name )
        return t;
    throw std::invalid_argument( "unknown transform '" + name + "'" );
  }

  size_t size() const { return entries_.size(); }
  Transform const& operator[]( size_t i ) const { return entries_[i]; }
  std::vector<Transform> const& entries() const { return entries_; }

  /*! \brief One line per entry: id, name, steps. */
  std::string listing() const
  {
    std::ostringstream os;
    for ( auto const& t : entries_ )
    {
      os << t.id << '\t' << t.name << '\t';
      for ( size_t i = 0; i < t.steps.size(); ++i )
      {
        auto const& s = t.steps[i];
        os << ( i ? "," : "" ) << primitive_name( s.op );
        if ( s.flag )
          os << ( s.op == primitive::balance ? ":dup" : ":zero-gain" );
        if ( s.param )
          os << ":k" << int( s.param );
      }
      os << '\n';
    }
    return os.str();
  }

private:
  std::vector<Transform> entries_;
};

struct Move
{
  uint32_t transform_id{ 0 };
  Aig result;
};

/*! \brief Picks a catalog entry uniformly with the seeded generator and applies it. */
inline Move random_move( TransformCatalog const& catalog, Aig const& aig, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<size_t> pick( 0, catalog.size() - 1 );
  auto const& t = catalog[pick( rng )];
  return Move{ t.id, apply( t, aig, rng() ) };
}

} // namespace aigopt
