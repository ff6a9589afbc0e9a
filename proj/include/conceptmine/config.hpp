#pragma once

#include "conceptmine/align.hpp"
#include "conceptmine/bootstrap.hpp"
#include "conceptmine/corpus.hpp"
#include "conceptmine/discriminator.hpp"
#include "conceptmine/seqlabel.hpp"
#include "conceptmine/tagger.hpp"
#include "conceptmine/taxonomy_builder.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace conceptmine {

// Every tunable knob, with the documented defaults. A JSON config file may
// override any subset, e.g. {"bootstrap": {"alpha": 0.5}, "tagger": {"delta_u": 0.6}}.
struct Config {
  LogFilter logs;
  BootstrapOptions bootstrap;
  AlignOptions align;
  CrfTrainOptions crf;
  QualityOptions gate;
  TaggerOptions tagger;
  TaxonomyBuildOptions taxonomy;
  std::size_t rewrite_budget = 10;
  std::uint64_t seed = 17;
  int threads = 1;
};

// Unknown keys are rejected so typos do not pass silently. Throws
// std::runtime_error with the offending key.
Config read_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace conceptmine
