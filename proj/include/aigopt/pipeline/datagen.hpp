/*!
  \file datagen.hpp
  \brief Labeled corpus generation by random transformation sequences
*/

#pragma once

#include "../aiger.hpp"
#include "../features.hpp"
#include "../mapper.hpp"
#include "../transforms/catalog.hpp"
#include "dataset_file.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace aigopt
{

struct DatagenConfig
{
  uint32_t count{ 2000 };
  uint32_t min_seq{ 2 };
  uint32_t max_seq{ 20 };
  uint64_t seed{ 1 };
  bool dedup{ true };
  /*! \brief Continue each sequence from the previous candidate instead of restarting at the source. */
  bool cumulative{ false };
  /*! \brief Candidate budget; 0 means 10 x count. */
  uint64_t max_attempts{ 0 };

  void validate() const
  {
    if ( count < 1 )
      throw std::invalid_argument( "count must be at least 1" );
    if ( min_seq < 1 || min_seq > max_seq )
      throw std::invalid_argument( "sequence bounds need 1 <= min_seq <= max_seq" );
  }
};

struct CorpusEntry
{
  uint64_t hash{ 0 };     //!< FNV-1a of the emitted AIGER text
  uint64_t seed{ 0 };     //!< seed of the candidate's sequence
  uint64_t attempt{ 0 };  //!< candidate index, 0 for the source
  std::vector<uint32_t> sequence;
  Aig aig;
  std::vector<double> features;
  GroundTruth truth;
};

struct Corpus
{
  std::string design;
  DatagenConfig config;
  std::vector<std::string> feature_names;
  std::vector<CorpusEntry> entries;
  uint64_t attempts{ 0 };
  bool saturated{ false };

  CorpusTable table() const
  {
    CorpusTable t;
    t.feature_names = feature_names;
    for ( auto const& e : entries )
      t.rows.push_back( { design, e.features, e.truth.delay, e.truth.area } );
    return t;
  }
};

/*! \brief The source AIG followed by unique variants, each from a seeded sequence of catalog moves.
 *
 * Candidate i draws its length uniformly from [min_seq, max_seq] and its move
 * seeds from derive_seed(seed, i).  Generation stops at `count` entries or
 * when the candidate budget runs out, in which case `saturated` is set.
 */
inline Corpus generate_corpus( Aig const& source, TransformCatalog const& catalog, CellLibrary const& lib, DatagenConfig const& cfg,
                               FeatureConfig const& fcfg = {} )
{
  cfg.validate();
  Corpus c;
  c.design = source.name();
  c.config = cfg;
  c.feature_names = feature_header( fcfg );
  uint64_t budget = cfg.max_attempts ? cfg.max_attempts : uint64_t( 10 ) * cfg.count;

  std::unordered_set<uint64_t> seen;
  auto add = [&]( Aig aig, uint64_t hash, uint64_t seed, uint64_t attempt, std::vector<uint32_t> seq ) {
    CorpusEntry e;
    e.hash = hash;
    e.seed = seed;
    e.attempt = attempt;
    e.sequence = std::move( seq );
    e.features = extract_features( aig, fcfg ).row();
    e.truth = ground_truth( aig, lib );
    e.aig = std::move( aig );
    c.entries.push_back( std::move( e ) );
  };

  uint64_t source_hash = fnv1a64( emit_aiger( source ) );
  seen.insert( source_hash );
  add( source, source_hash, 0, 0, {} );

  Aig walk = source;
  while ( c.entries.size() < cfg.count && c.attempts < budget )
  {
    uint64_t attempt = ++c.attempts;
    uint64_t seed = derive_seed( cfg.seed, attempt );
    std::mt19937_64 rng( seed );
    std::uniform_int_distribution<uint32_t> length( cfg.min_seq, cfg.max_seq );
    uint32_t len = length( rng );
    Aig cur = cfg.cumulative ? walk : source;
    std::vector<uint32_t> seq;
    for ( uint32_t k = 0; k < len; ++k )
    {
      auto m = random_move( catalog, cur, rng() );
      seq.push_back( m.transform_id );
      cur = std::move( m.result );
    }
    if ( cfg.cumulative )
      walk = cur;
    uint64_t hash = fnv1a64( emit_aiger( cur ) );
    if ( !seen.insert( hash ).second && cfg.dedup )
      continue;
    add( std::move( cur ), hash, seed, attempt, std::move( seq ) );
  }
  c.saturated = c.entries.size() < cfg.count;
  return c;
}

/*! \brief Relative AIGER path of entry `i` inside a corpus directory. */
inline std::string corpus_aiger_path( Corpus const& c, size_t i )
{
  char buf[32];
  std::snprintf( buf, sizeof( buf ), "_%05zu.aag", i );
  return "aigs/" + c.design + buf;
}

/*! \brief Manifest of every entry: hash, AIGER path, sequence, features and labels. */
inline nlohmann::ordered_json corpus_manifest( Corpus const& c, TransformCatalog const& catalog )
{
  nlohmann::ordered_json j;
  j["design"] = c.design;
  j["seed"] = c.config.seed;
  j["requested"] = c.config.count;
  j["generated"] = c.entries.size();
  j["attempts"] = c.attempts;
  j["saturated"] = c.saturated;
  j["min_seq"] = c.config.min_seq;
  j["max_seq"] = c.config.max_seq;
  j["dedup"] = c.config.dedup;
  j["cumulative"] = c.config.cumulative;
  j["features"] = c.feature_names;
  auto& rows = j["entries"] = nlohmann::ordered_json::array();
  for ( size_t i = 0; i < c.entries.size(); ++i )
  {
    auto const& e = c.entries[i];
    nlohmann::ordered_json r;
    r["index"] = i;
    r["hash"] = hex64( e.hash );
    r["aiger"] = corpus_aiger_path( c, i );
    r["seed"] = hex64( e.seed );
    std::vector<std::string> names;
    for ( auto id : e.sequence )
      names.push_back( catalog[id].name );
    r["sequence"] = names;
    r["features"] = e.features;
    r["delay"] = e.truth.delay;
    r["area"] = e.truth.area;
    rows.push_back( std::move( r ) );
  }
  return j;
}

/*! \brief Writes `<design>.csv`, `<design>.manifest.json` and, when requested, one AIGER file per entry. */
inline void write_corpus( Corpus const& c, TransformCatalog const& catalog, std::filesystem::path const& dir, bool aigers = true )
{
  std::filesystem::create_directories( dir );
  write_text_file( ( dir / ( c.design + ".csv" ) ).string(), write_dataset( c.table() ) );
  write_text_file( ( dir / ( c.design + ".manifest.json" ) ).string(), corpus_manifest( c, catalog ).dump( 1 ) + "\n" );
  if ( !aigers )
    return;
  std::filesystem::create_directories( dir / "aigs" );
  for ( size_t i = 0; i < c.entries.size(); ++i )
    write_text_file( ( dir / corpus_aiger_path( c, i ) ).string(), emit_aiger( c.entries[i].aig ) );
}

} // namespace aigopt
