#pragma once

#include <optional>
#include <string_view>

namespace risssk {

enum class SchemeKind { intelligent_ris_ssk, blind_ris_ssk, traditional_ssk };

std::string_view to_string(SchemeKind scheme) noexcept;
std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept;

inline bool uses_ris(SchemeKind scheme) noexcept { return scheme != SchemeKind::traditional_ssk; }

}  // namespace risssk
