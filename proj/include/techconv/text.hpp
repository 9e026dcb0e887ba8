#pragma once

#include <string>
#include <string_view>

namespace techconv::text {

/// Unicode full case folding of UTF-8 input (ICU).
std::string fold_case(std::string_view utf8);

/// Case-fold, trim, and collapse runs of Unicode whitespace to one space.
std::string normalize_tag(std::string_view utf8);

}  // namespace techconv::text
