#pragma once

#include "gsip/problem_file.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsip {

// One stored benchmark instance, kept in problem-file text after the hand transformations
// (substitutions, Taylor truncation, epigraphs, auxiliary variables) recorded in its meta.
struct CorpusEntry {
  std::string id;
  std::string text;
  ProblemFile file;  // parsed text
  std::string suite;
  bool slow = false;

  std::optional<double> f_ref() const;
  std::optional<int> loops_ref() const;
  std::string status_ref() const;  // "optimal" unless the meta says otherwise
  std::vector<double> x_ref() const;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry* find_instance(const std::string& id);

// Instances of sec6, appendixA, appendixB or all (corpus order). Throws on an unknown name.
std::vector<const CorpusEntry*> suite(const std::string& name, bool include_slow = false);

}  // namespace gsip
