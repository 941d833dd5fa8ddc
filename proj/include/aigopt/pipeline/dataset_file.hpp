/*!
  \file dataset_file.hpp
  \brief Labeled feature tables and their comma-separated file format
*/

#pragma once

#include "../gbdt.hpp"
#include "../util.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aigopt
{

/*! \brief Malformed or inconsistent input data. */
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct CorpusRow
{
  std::string design;
  std::vector<double> features;
  double delay{ 0 };
  double area{ 0 };
};

/*! \brief Feature rows with ground-truth labels; column order is the feature header. */
struct CorpusTable
{
  std::vector<std::string> feature_names;
  std::vector<CorpusRow> rows;

  size_t column( std::string const& name ) const
  {
    for ( size_t i = 0; i < feature_names.size(); ++i )
      if ( feature_names[i] == name )
        return i;
    throw DataError( "dataset has no column '" + name + "'" );
  }

  std::set<std::string> designs() const
  {
    std::set<std::string> s;
    for ( auto const& r : rows )
      s.insert( r.design );
    return s;
  }

  void append( CorpusTable const& other )
  {
    if ( other.feature_names != feature_names )
      throw DataError( "dataset headers differ" );
    rows.insert( rows.end(), other.rows.begin(), other.rows.end() );
  }
};

/*! \brief Header `design,<features...>,delay,area`, then one row per AIG with shortest round-trip numbers. */
inline std::string write_dataset( CorpusTable const& t )
{
  std::string out = "design";
  for ( auto const& n : t.feature_names )
    out += "," + n;
  out += ",delay,area\n";
  for ( auto const& r : t.rows )
  {
    if ( r.design.empty() || r.design.find_first_of( ",\n\r" ) != std::string::npos )
      throw DataError( "design tag '" + r.design + "' cannot be written" );
    if ( r.features.size() != t.feature_names.size() )
      throw DataError( "row width differs from header" );
    out += r.design;
    for ( double v : r.features )
      out += "," + format_double( v );
    out += "," + format_double( r.delay ) + "," + format_double( r.area ) + "\n";
  }
  return out;
}

inline CorpusTable parse_dataset( std::string const& text )
{
  auto split = []( std::string const& line ) {
    std::vector<std::string> f;
    std::stringstream ss( line );
    std::string tok;
    while ( std::getline( ss, tok, ',' ) )
      f.push_back( tok );
    if ( !line.empty() && line.back() == ',' )
      f.emplace_back();
    return f;
  };
  std::istringstream is( text );
  std::string line;
  if ( !std::getline( is, line ) )
    throw DataError( "dataset is empty" );
  auto head = split( line );
  if ( head.size() < 3 || head.front() != "design" || head[head.size() - 2] != "delay" || head.back() != "area" )
    throw DataError( "dataset header must be design,<features>,delay,area" );
  CorpusTable t;
  t.feature_names.assign( head.begin() + 1, head.end() - 2 );
  uint32_t line_no = 1;
  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( line.empty() )
      continue;
    auto f = split( line );
    if ( f.size() != head.size() )
      throw DataError( "line " + std::to_string( line_no ) + ": expected " + std::to_string( head.size() ) + " fields" );
    CorpusRow r;
    r.design = f[0];
    try
    {
      for ( size_t i = 1; i + 2 < f.size(); ++i )
        r.features.push_back( parse_double( f[i] ) );
      r.delay = parse_double( f[f.size() - 2] );
      r.area = parse_double( f.back() );
    }
    catch ( std::invalid_argument const& e )
    {
      throw DataError( "line " + std::to_string( line_no ) + ": " + e.what() );
    }
    t.rows.push_back( std::move( r ) );
  }
  return t;
}

inline CorpusTable read_dataset_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw DataError( "cannot open dataset '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset( ss.str() );
}

inline void write_text_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw DataError( "cannot write '" + path + "'" );
  out << text;
}

inline std::string read_text_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw DataError( "cannot open '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class label_kind
{
  delay,
  area
};

inline label_kind parse_label_kind( std::string const& s )
{
  if ( s == "delay" )
    return label_kind::delay;
  if ( s == "area" )
    return label_kind::area;
  throw DataError( "unknown target '" + s + "' (expected delay or area)" );
}

/*! \brief Training view of the table with one label column; design names become tags. */
inline Dataset to_dataset( CorpusTable const& t, label_kind target = label_kind::delay )
{
  Dataset d( t.feature_names );
  try
  {
    for ( auto const& r : t.rows )
      d.add( r.features, target == label_kind::delay ? r.delay : r.area, r.design );
  }
  catch ( std::invalid_argument const& e )
  {
    throw DataError( e.what() );
  }
  return d;
}

struct TagSplit
{
  CorpusTable train;
  CorpusTable test;
};

/*! \brief Rows of the held-out designs go to `test`, all others to `train`; both sides must be non-empty. */
inline TagSplit split_by_design( CorpusTable const& t, std::set<std::string> const& held_out )
{
  TagSplit s;
  s.train.feature_names = s.test.feature_names = t.feature_names;
  for ( auto const& r : t.rows )
    ( held_out.count( r.design ) ? s.test : s.train ).rows.push_back( r );
  if ( s.train.rows.empty() )
    throw DataError( "design split leaves no training rows" );
  if ( s.test.rows.empty() )
    throw DataError( "design split leaves no held-out rows" );
  return s;
}

} // namespace aigopt
