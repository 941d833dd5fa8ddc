/*!
  \file accounting.hpp
  \brief Live-node reference counting over a graph under construction
*/

#pragma once

#include "../aig.hpp"

#include <cstdint>
#include <vector>

namespace aigopt::detail
{

/* Reference counts for the AND nodes of an AigBuilder.  A node is live while
 * its count is positive; the first reference to a node also references its
 * fanins, and dropping the last one releases them.  Nodes created but never
 * referenced are dead and vanish at build() time. */
class live_tracker
{
public:
  explicit live_tracker( AigBuilder const& b ) : b_( b ) {}

  void ref( Edge e )
  {
    node_id n = e.node();
    if ( !is_and( n ) )
      return;
    grow();
    if ( refs_[n]++ == 0 )
    {
      ref( b_.fanin0( n ) );
      ref( b_.fanin1( n ) );
    }
  }

  void deref( Edge e )
  {
    node_id n = e.node();
    if ( !is_and( n ) )
      return;
    grow();
    if ( --refs_[n] == 0 )
    {
      deref( b_.fanin0( n ) );
      deref( b_.fanin1( n ) );
    }
  }

  /*! Number of dead AND nodes that referencing `e` would bring back to life. */
  uint32_t revival_cost( Edge e )
  {
    grow();
    ++stamp_;
    return revive_count( e.node() );
  }

private:
  bool is_and( node_id n ) const { return n < b_.size() && b_.is_and( n ); }

  void grow()
  {
    if ( refs_.size() < b_.size() )
    {
      refs_.resize( b_.size(), 0 );
      seen_.resize( b_.size(), 0 );
    }
  }

  uint32_t revive_count( node_id n )
  {
    if ( !is_and( n ) || refs_[n] > 0 || seen_[n] == stamp_ )
      return 0;
    seen_[n] = stamp_;
    return 1 + revive_count( b_.fanin0( n ).node() ) + revive_count( b_.fanin1( n ).node() );
  }

  AigBuilder const& b_;
  std::vector<uint32_t> refs_;
  std::vector<uint32_t> seen_;
  uint32_t stamp_{ 0 };
};

} // namespace aigopt::detail
