#pragma once

namespace cyic {

/// Version stamped into every stage output; stages refuse inputs with another value.
inline constexpr int kSchemaVersion = 1;

}  // namespace cyic
