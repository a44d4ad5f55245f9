#pragma once

#include "nlpbma/bench.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlpbma {

/* JSON renderings of benchmark artifacts (keys emitted in sorted order so
 * reruns with the same configuration are byte-identical). */
std::string to_json(const SimStudyResult& result);
std::string to_json(const ShrinkageReport& report);

/* replicate x method rows as CSV text */
std::string sse_rows_csv(const SimStudyResult& result);

/* Reproducibility manifest: configuration key/value pairs, the seed and the
 * library version. */
std::string manifest_json(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& config,
                          std::uint64_t seed);

}  // namespace nlpbma
