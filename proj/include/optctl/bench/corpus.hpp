#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optctl/bench/manifest.hpp"
#include "optctl/bench/task.hpp"

namespace optctl::bench {

// Expands the 30 basic tasks into the 410-task corpus:
//   10 single x (5 paraphrase + 5 non-sequitur + 3 error + 3 role) = 160
//   10 dual   x (5 paraphrase + 5 non-sequitur) + 10 x 5 chain     = 150
//   10 triple x (5 paraphrase + 5 non-sequitur)                    = 100
// Deterministic for a given seed; cardinality is seed-independent.
std::vector<TaskRecord> generate_corpus(const TaskManifest& manifest, std::uint32_t seed);

void write_corpus_jsonl(const std::vector<TaskRecord>& corpus, const std::string& path);
std::vector<TaskRecord> read_corpus_jsonl(const std::string& path);

}  // namespace optctl::bench
