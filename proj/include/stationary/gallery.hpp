#pragma once

#include "stationary/manifold.hpp"

#include <optional>
#include <string>

namespace stationary {

struct GalleryEntry {
  std::string name;
  std::string parameter;  // empty when the entry has no parameter
  double default_value = 0;
  std::string description;
};

std::vector<GalleryEntry> gallery_catalog();

/// Builds a named spec on the unit disk. `value` overrides the default
/// parameter. Throws ConfigError for unknown names.
Spec gallery_spec(const std::string& name, std::optional<double> value = std::nullopt);

Spec flat_disk();
Spec rotating_disk(double epsilon = 0.1);
Spec bumpy_lambda(double epsilon = 0.5);
Spec magnetic_disk(double c = 0.5);
Spec acoustic_analogue(double swirl = 0.2);

}  // namespace stationary
