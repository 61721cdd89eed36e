#pragma once

namespace ebseq {

inline constexpr const char* version = "0.1.0";

}
