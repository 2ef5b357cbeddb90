#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "localmech/graph.hpp"

namespace localmech {

/// Line-based graph text:
///
///   n m W
///   v w(v)        (n lines, v = 0..n-1 in order)
///   u v           (m lines, u < v)
///
/// Parsing is strict; every deviation throws FormatError naming the line.
/// The parsed graph is validated (self-loops, duplicates, weight range).
WeightedGraph ParseGraph(std::string_view text);
WeightedGraph ReadGraphFile(const std::string& path);

/// Writes the canonical text form; edges are emitted as (min, max).
std::string FormatGraph(const WeightedGraph& g);
void WriteGraphFile(const WeightedGraph& g, const std::string& path);

}  // namespace localmech
