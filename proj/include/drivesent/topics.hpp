#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace drivesent {

class Rng;

class Vocabulary {
 public:
  // Returns the existing index or appends the term.
  int add(const std::string& term);
  std::optional<int> find(const std::string& term) const;
  const std::string& term(int id) const { return terms_.at(static_cast<std::size_t>(id)); }
  int size() const noexcept { return static_cast<int>(terms_.size()); }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> terms_;
};

struct LdaParams {
  int topics = 10;
  double alpha = 5.0;  // 50 / topics
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 1;
};

struct WeightedTerm {
  std::string term;
  double weight = 0;
  bool operator==(const WeightedTerm&) const = default;
};

// Latent Dirichlet Allocation state after collapsed Gibbs sampling.
// Counts are kept word-major internally; `topic_word(k, w)` gives n_kw.
class LdaModel {
 public:
  using SweepObserver = std::function<void(const LdaModel&, int sweep)>;

  // Empty documents are dropped before sampling. Throws ParameterError for
  // topics < 1, iterations < 1 or nonpositive priors, EmptyInputError when
  // no tokens remain. `observer`, if set, runs after every full sweep.
  static LdaModel fit(const std::vector<std::vector<std::string>>& docs, const LdaParams& params,
                      const SweepObserver& observer = {});

  const LdaParams& params() const noexcept { return params_; }
  int topics() const noexcept { return params_.topics; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  int documents() const noexcept { return static_cast<int>(doc_words_.size()); }

  int topic_word(int k, int w) const { return n_wk_[idx(w, k)]; }
  int doc_topic(int d, int k) const { return n_dk_[static_cast<std::size_t>(d) * K() + k]; }
  int topic_total(int k) const { return n_k_[static_cast<std::size_t>(k)]; }
  const std::vector<std::vector<int>>& assignments() const noexcept { return z_; }
  const std::vector<std::vector<int>>& doc_words() const noexcept { return doc_words_; }

  // Terms by phi_k(w) descending, ties by term ascending; n clamps to V.
  std::vector<WeightedTerm> top_words(int k, int n) const;

  // phi[k][w] = (n_kw + beta) / (n_k + V beta)
  std::vector<std::vector<double>> phi() const;
  // theta[d][k] = (n_dk + alpha) / (N_d + K alpha)
  std::vector<std::vector<double>> theta() const;

  // Recounts everything from the assignments; true when all stored counts
  // agree and every assignment is in range.
  bool counts_consistent() const;

  // {"K", "alpha", "beta", "topics": [{"id", "words": [{"term", "weight"}]}]}
  nlohmann::json to_json(int words_per_topic) const;

 private:
  std::size_t K() const noexcept { return static_cast<std::size_t>(params_.topics); }
  std::size_t idx(int w, int k) const { return static_cast<std::size_t>(w) * K() + k; }
  void sweep(Rng& rng, std::vector<double>& cdf);

  LdaParams params_;
  Vocabulary vocab_;
  std::vector<std::vector<int>> doc_words_;
  std::vector<std::vector<int>> z_;
  std::vector<int> n_wk_;  // V x K
  std::vector<int> n_dk_;  // D x K
  std::vector<int> n_k_;
};

}  // namespace drivesent
