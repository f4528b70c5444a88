#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gangnet {

using Row = std::vector<double>;

// Synthetic minority rows, each on the segment from a random minority row to
// one of its k nearest minority neighbours (Euclidean distance after
// standardizing each column over the minority rows).
std::vector<Row> smote(const std::vector<Row>& minority, std::size_t k, std::size_t count, std::uint64_t seed);

// Count for a multiplier: amount * |minority|, rounded. amount 0 asks for
// enough rows to match `majority`.
std::size_t smote_count(std::size_t minority, std::size_t majority, double amount);

}  // namespace gangnet
