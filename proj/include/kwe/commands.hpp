#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kwe/runconfig.hpp"

namespace kwe {

// Subcommand bodies. Each validates its inputs (UsageError on missing paths),
// writes file artifacts plus a resolved-config sidecar, and prints a short
// summary to `out`. Errors propagate as typed exceptions; the binary maps
// them to exit codes.

void cmd_ingest(const RunConfig& cfg, std::ostream& out);
void cmd_graph(const RunConfig& cfg, std::ostream& out);
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_eval(const RunConfig& cfg, const std::string& task,
              const std::string& mode,
              const std::vector<std::string>& stats_reports, std::ostream& out);
void cmd_nn(const RunConfig& cfg, const std::string& keyword, std::uint32_t k,
            std::ostream& out);
void cmd_stats(const RunConfig& cfg,
               const std::vector<std::string>& report_paths,
               std::vector<std::string> names, std::ostream& out);

// Train/eval document split derived from the run seed. `train_scope=all_docs`
// trains on every document (the split still defines evaluation queries);
// `train_split` holds the test documents out of training too.
Split training_split(const Corpus& corpus, const RunConfig& cfg);
Split evaluation_split(const Corpus& corpus, const RunConfig& cfg);

}  // namespace kwe
