#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include "flarevt/catalog.hpp"

namespace flarevt {

struct BlockMaxima {
  std::vector<double> maxima;
  /// Blocks inside the catalog span that contained no event.
  std::size_t empty_blocks = 0;
};

/// Maxima over consecutive blocks of `block_length`, the first block
/// starting at the first event. Throws DomainError for a non-positive length.
BlockMaxima block_maxima(const Catalog& catalog, std::chrono::seconds block_length);

/// One maximum per calendar (UTC) year that contains at least one event.
BlockMaxima annual_maxima(const Catalog& catalog);

/// Maxima over consecutive runs of `block_size` observations; a trailing
/// partial block is dropped.
std::vector<double> block_maxima(std::span<const double> series, std::size_t block_size);

}  // namespace flarevt
