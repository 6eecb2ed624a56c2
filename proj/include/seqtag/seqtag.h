/*
 * seqtag C API.
 *
 * Every function returns a seqtag_status; on failure a human-readable message
 * is available from seqtag_last_error() on the calling thread until its next
 * API call. Strings returned through char** parameters are owned by the
 * caller and must be released with seqtag_string_free().
 */
#ifndef SEQTAG_H
#define SEQTAG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEQTAG_BUILDING_LIBRARY)
#    define SEQTAG_API __declspec(dllexport)
#  else
#    define SEQTAG_API __declspec(dllimport)
#  endif
#else
#  define SEQTAG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum seqtag_status {
  SEQTAG_OK = 0,
  SEQTAG_ERR_INVALID_ARGUMENT = 1,
  SEQTAG_ERR_IO = 2,
  SEQTAG_ERR_MALFORMED_LINE = 3,
  SEQTAG_ERR_EMPTY_CORPUS = 4,
  SEQTAG_ERR_EMPTY_VOCABULARY = 5,
  SEQTAG_ERR_POSITION_OUT_OF_RANGE = 6,
  SEQTAG_ERR_NO_EXAMPLES = 7,
  SEQTAG_ERR_DEGENERATE_PROBLEM = 8,
  SEQTAG_ERR_SINGLE_CATEGORY = 9,
  SEQTAG_ERR_UNKNOWN_METHOD = 10,
  SEQTAG_ERR_MISSING_GOLD_TAGS = 11,
  SEQTAG_ERR_INVALID_SPEC = 12,
  SEQTAG_ERR_FORMAT_VERSION_MISMATCH = 13,
  SEQTAG_ERR_CORRUPT_MODEL = 14,
  SEQTAG_ERR_INTERNAL = 99
} seqtag_status;

typedef enum seqtag_method {
  SEQTAG_METHOD_BASELINE = 0,
  SEQTAG_METHOD_DLIST = 1,
  SEQTAG_METHOD_MAXENT = 2,
  SEQTAG_METHOD_SVM = 3
} seqtag_method;

typedef struct seqtag_options {
  int method;              /* seqtag_method */
  int window;              /* context words on each side */
  int use_pos;             /* candidate-tag features */
  int use_pos_order;       /* (candidate tag, frequency rank) features */
  int use_word;            /* word identity features */
  double svm_c;
  int svm_degree;
  double svm_kkt_tolerance;
  size_t svm_max_passes;
  size_t gis_max_iterations;
  double gis_tolerance;
  size_t dlist_min_count;
  unsigned threads;        /* concurrent pairwise trainings, 0 = hardware */
} seqtag_options;

typedef struct seqtag_synth_options {
  uint64_t seed;
  size_t sentences;
  double ambiguity_rate;
  double signal_strength;
  size_t ambiguous_words;
  size_t min_candidates;
  size_t max_candidates;
  size_t cue_words;
  double test_fraction;
} seqtag_synth_options;

typedef struct seqtag_metrics {
  size_t ambiguous_total, ambiguous_correct;
  size_t unambiguous_total, unambiguous_correct;
  size_t unknown_total, unknown_correct;
  size_t all_total, all_correct;
  int has_ambiguous_precision; /* 0 when there were no ambiguous tokens */
  double ambiguous_precision;
  int has_all_words_precision;
  double all_words_precision;
} seqtag_metrics;

typedef struct seqtag_bundle seqtag_bundle;

SEQTAG_API const char* seqtag_version(void);
SEQTAG_API const char* seqtag_status_name(seqtag_status status);
SEQTAG_API const char* seqtag_last_error(void);
SEQTAG_API void seqtag_string_free(char* text);

/* Defaults: svm, window 3, all feature groups, C = 1, degree 2. */
SEQTAG_API void seqtag_options_init(seqtag_options* options);
SEQTAG_API seqtag_status seqtag_options_validate(const seqtag_options* options);
/* Parses "baseline", "dlist", "maxent" or "svm". */
SEQTAG_API seqtag_status seqtag_method_parse(const char* name, int* method);
SEQTAG_API const char* seqtag_method_name(int method);

SEQTAG_API void seqtag_synth_options_init(seqtag_synth_options* options);

/* Trains on a tab-tagged corpus. lexicon_path (optional) names a
 * word<TAB>tag1,tag2,... override file; report (optional) receives a
 * key=value training summary. */
SEQTAG_API seqtag_status seqtag_train_file(const char* corpus_path,
                                           const char* lexicon_path,
                                           const seqtag_options* options,
                                           seqtag_bundle** bundle,
                                           char** report);
SEQTAG_API void seqtag_bundle_free(seqtag_bundle* bundle);
SEQTAG_API seqtag_status seqtag_bundle_save(const seqtag_bundle* bundle,
                                            const char* path);
SEQTAG_API seqtag_status seqtag_bundle_load(const char* path,
                                            seqtag_bundle** bundle);
/* key=value lines: method, tags, words, features, feature groups. */
SEQTAG_API seqtag_status seqtag_bundle_describe(const seqtag_bundle* bundle,
                                                char** text);

/* Tags a corpus given as text (format "tab-words" or "tab-tagged"), producing
 * word<TAB>tag<TAB>provenance lines with a blank line after each sentence. */
SEQTAG_API seqtag_status seqtag_tag_text(const seqtag_bundle* bundle,
                                         const char* input, const char* format,
                                         char** output);
SEQTAG_API seqtag_status seqtag_tag_file(const seqtag_bundle* bundle,
                                         const char* path, const char* format,
                                         char** output);

SEQTAG_API seqtag_status seqtag_evaluate_file(const seqtag_bundle* bundle,
                                              const char* test_path,
                                              seqtag_metrics* metrics);

/* Runs every method in `methods` with the feature groups of `options`, and
 * again without word features when `ablation` is non-zero. A NULL test_path
 * splits the training file (last share of sentences becomes the test set).
 * Either output pointer may be NULL. */
SEQTAG_API seqtag_status seqtag_compare_files(const char* train_path,
                                              const char* test_path,
                                              const int* methods,
                                              size_t method_count,
                                              const seqtag_options* options,
                                              int ablation, int with_timing,
                                              char** table, char** records);

/* As seqtag_compare_files on a generated corpus split per synth->test_fraction. */
SEQTAG_API seqtag_status seqtag_compare_synthetic(const seqtag_synth_options* synth,
                                                  const int* methods,
                                                  size_t method_count,
                                                  const seqtag_options* options,
                                                  int ablation, int with_timing,
                                                  char** table, char** records);

/* Writes the training and test parts of a generated corpus (tab-tagged). */
SEQTAG_API seqtag_status seqtag_generate_files(const seqtag_synth_options* synth,
                                               const char* train_path,
                                               const char* test_path);

#ifdef __cplusplus
}
#endif

#endif /* SEQTAG_H */
