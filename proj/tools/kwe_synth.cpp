#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "kwe/corpus.hpp"
#include "kwe/error.hpp"
#include "kwe/synthetic.hpp"

// Writes a deterministic synthetic keyword corpus (JSONL) plus a list of
// held-out keyword strings that appear in no document. Useful for demos and
// for exercising the pipeline without a real dataset.
int main(int argc, char** argv) {
  CLI::App app{"generate a synthetic keyword-annotated corpus"};
  kwe::SyntheticSpec spec;
  std::string out_path;
  std::string held_out_path;
  app.add_option("--out", out_path, "Corpus JSONL output")->required();
  app.add_option("--held-out", held_out_path,
                 "Held-out keyword list output (one per line)");
  app.add_option("--docs", spec.docs, "Documents to generate");
  app.add_option("--fields", spec.fields, "Disjoint keyword fields");
  app.add_option("--hubs-per-field", spec.hubs_per_field,
                 "Recurring keywords per field");
  app.add_option("--hubs-per-doc", spec.hubs_per_doc,
                 "Hub keywords per document");
  app.add_option("--bridge-docs", spec.bridge_docs,
                 "Documents that also cite a hub of the next field");
  app.add_option("--min-unique", spec.min_unique,
                 "Minimum unique keywords per document");
  app.add_option("--max-unique", spec.max_unique,
                 "Maximum unique keywords per document");
  app.add_option("--word-pool", spec.word_pool,
                 "Distinct theme words, sliced evenly across fields");
  app.add_option("--theme-words", spec.theme_words,
                 "Words a document's unique keywords draw from");
  app.add_option("--held-out-count", spec.held_out,
                 "Held-out keyword strings to generate");
  app.add_option("--seed", spec.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const kwe::SyntheticCorpus synth = kwe::make_synthetic_corpus(spec);
    {
      std::ofstream out(out_path, std::ios::trunc);
      if (!out) throw kwe::DataError("cannot write '" + out_path + "'");
      kwe::write_corpus_jsonl(synth.corpus, out);
    }
    if (!held_out_path.empty()) {
      std::ofstream out(held_out_path, std::ios::trunc);
      if (!out) throw kwe::DataError("cannot write '" + held_out_path + "'");
      for (const std::string& kw : synth.held_out) out << kw << "\n";
    }
    std::cout << synth.corpus.docs.size() << " documents written to "
              << out_path << "\n";
  } catch (const kwe::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const kwe::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
