#pragma once

#include <string>
#include <string_view>

#include "gangnet/domain.hpp"

namespace fixture {

inline std::string csv(std::string_view body) {
  return std::string(gangnet::kArrestsHeader) + "\n" + std::string(body);
}

inline gangnet::Dataset dataset(std::string_view body) { return gangnet::Dataset(gangnet::parse_records(csv(body))); }

}  // namespace fixture
