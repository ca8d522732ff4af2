#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cmemnn {

/// One clinical-style note: lowercased tokens plus its gold diagnosis labels.
struct Note {
  std::string id;
  std::vector<std::string> tokens;       // post-truncation
  std::vector<std::string> gold_labels;  // normalized, sorted, unique
};

/// One knowledge-base page; the title is the label-aligned name.
struct KBPage {
  std::string title;
  std::vector<std::string> body_tokens;  // post-truncation
};

/// Word ids for embedding lookup. Id 0 is UNK, id 1 is PAD; real words start
/// at 2. No stopword holds an id.
struct Vocabulary {
  static constexpr int kUnkId = 0;
  static constexpr int kPadId = 1;
  static constexpr int kReservedIds = 2;

  std::unordered_map<std::string, int> word_to_id;
  std::vector<std::string> id_to_word;  // includes the reserved entries
  std::unordered_set<std::string> stopwords;
  std::unordered_map<std::string, std::int64_t> frequency;

  int size() const { return static_cast<int>(id_to_word.size()); }
  int encode_word(const std::string& w) const;
  std::vector<int> encode(const std::vector<std::string>& tokens) const;

  /// Rebuild from an id-ordered word list (checkpoint manifests).
  static Vocabulary from_word_list(const std::vector<std::string>& words);
};

/// The N most frequent labels, descending frequency, ties lexicographic.
struct LabelSpace {
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(labels.size()); }
  int find(const std::string& label) const;  // -1 if absent

  static LabelSpace from_labels(std::vector<std::string> ordered);
};

/// Ranked page indices for one note's memory, most relevant first.
struct Retrieval {
  std::vector<int> pages;
};

/// Lowercase and split on non-alphanumeric runs.
std::vector<std::string> tokenize(const std::string& text);

/// Canonical form of a label or page title: tokenized and re-joined.
std::string normalize_label(const std::string& s);

std::vector<std::string> truncate(std::vector<std::string> tokens, int limit);

/// JSONL ingestion. Notes: {id, text, labels}; KB: {title, text}.
/// Malformed lines and schema violations raise DataError with line numbers.
std::vector<Note> ingest_notes(const std::string& path, int truncate_limit = 600,
                               bool require_labels = true);
std::vector<KBPage> ingest_kb(const std::string& path, int truncate_limit = 600);

std::unordered_set<std::string> load_stopwords(const std::string& path);

/// Removes every token subsequence that exactly matches a label in the
/// space, repeating until no match survives. Gold labels are untouched.
Note sanitize(Note note, const LabelSpace& labels);

Vocabulary build_vocab(const std::vector<Note>& notes,
                       const std::vector<KBPage>& pages, int cap,
                       const std::unordered_set<std::string>& stopwords);

LabelSpace top_n_labels(const std::vector<Note>& notes, int n);

/// Inverted word index over page bodies for candidate retrieval, scored by
/// shared distinct in-vocabulary tokens weighted by inverse document
/// frequency. Falls back to label-frequency-aligned pages when a note shares
/// nothing with the KB.
class KbIndex {
 public:
  KbIndex(const std::vector<KBPage>& kb, const Vocabulary& vocab,
          const LabelSpace* space = nullptr);

  Retrieval retrieve(const std::vector<std::string>& note_tokens, int cap) const;

 private:
  std::unordered_map<std::string, std::vector<int>> postings_;
  std::vector<double> idf_by_word_;  // parallel to postings_ insertion? no — map token->idf
  std::unordered_map<std::string, double> idf_;
  std::vector<int> fallback_;  // page indices in label-frequency order
  std::vector<std::string> titles_;
  int page_count_ = 0;
};

Retrieval hash_retrieve(const Note& note, const std::vector<KBPage>& kb,
                        const Vocabulary& vocab, int cap,
                        const LabelSpace* space = nullptr);

/// Synthetic diagnostic-inference corpus: diseases with disjoint symptom
/// vocabularies, Zipf-distributed label sampling, shared noise words.
struct GeneratorSpec {
  int diseases = 20;
  int notes = 2000;
  int symptoms_per_disease = 12;
  double noise_rate = 0.3;
  int max_labels = 4;
  double zipf_s = 1.1;
  std::uint64_t seed = 42;

  static GeneratorSpec from_file(const std::string& path);
  static GeneratorSpec from_text(const std::string& text);
  void validate() const;
};

struct SynthCorpus {
  std::vector<Note> notes;
  std::vector<KBPage> kb;
};

SynthCorpus synth_generate(const GeneratorSpec& spec);

/// Deterministic JSONL writers (used by the synth subcommand).
void write_notes_jsonl(const std::string& path, const std::vector<Note>& notes);
void write_kb_jsonl(const std::string& path, const std::vector<KBPage>& kb);

/// Seeded shuffle followed by contiguous slicing. Disjoint and exhaustive.
struct SplitIndices {
  std::vector<std::size_t> train, val, test;
};
SplitIndices split_indices(std::size_t count, double train_frac, double val_frac,
                           double test_frac, std::uint64_t seed);

struct Split {
  std::vector<Note> train, val, test;
};
Split split(const std::vector<Note>& notes, double train_frac, double val_frac,
            double test_frac, std::uint64_t seed);

}  // namespace cmemnn
