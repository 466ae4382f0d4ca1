#include "drivesent/topics.hpp"

#include <algorithm>

#include "drivesent/error.hpp"
#include "drivesent/rng.hpp"

namespace drivesent {

int Vocabulary::add(const std::string& term) {
  const auto [it, inserted] = index_.emplace(term, static_cast<int>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<int> Vocabulary::find(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LdaModel LdaModel::fit(const std::vector<std::vector<std::string>>& docs, const LdaParams& params,
                       const SweepObserver& observer) {
  if (params.topics < 1) throw ParameterError("LDA needs at least one topic");
  if (params.iterations < 1) throw ParameterError("LDA needs at least one iteration");
  if (!(params.alpha > 0) || !(params.beta > 0)) {
    throw ParameterError("LDA priors alpha and beta must be positive");
  }

  LdaModel m;
  m.params_ = params;
  for (const auto& doc : docs) {
    if (doc.empty()) continue;
    std::vector<int> ids;
    ids.reserve(doc.size());
    for (const auto& term : doc) ids.push_back(m.vocab_.add(term));
    m.doc_words_.push_back(std::move(ids));
  }
  if (m.doc_words_.empty()) throw EmptyInputError("LDA input has no tokens");

  const std::size_t K = m.K();
  const std::size_t V = static_cast<std::size_t>(m.vocab_.size());
  m.n_wk_.assign(V * K, 0);
  m.n_dk_.assign(m.doc_words_.size() * K, 0);
  m.n_k_.assign(K, 0);

  Rng rng(params.seed);
  m.z_.resize(m.doc_words_.size());
  for (std::size_t d = 0; d < m.doc_words_.size(); ++d) {
    const auto& words = m.doc_words_[d];
    auto& z = m.z_[d];
    z.resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      const int k = static_cast<int>(rng.below(K));
      z[i] = k;
      ++m.n_wk_[m.idx(words[i], k)];
      ++m.n_dk_[d * K + k];
      ++m.n_k_[k];
    }
  }

  std::vector<double> cdf(K);
  for (int it = 1; it <= params.iterations; ++it) {
    m.sweep(rng, cdf);
    if (observer) observer(m, it);
  }
  return m;
}

void LdaModel::sweep(Rng& rng, std::vector<double>& cdf) {
  const std::size_t K = this->K();
  const double alpha = params_.alpha;
  const double beta = params_.beta;
  const double vbeta = static_cast<double>(vocab_.size()) * beta;

  for (std::size_t d = 0; d < doc_words_.size(); ++d) {
    const auto& words = doc_words_[d];
    auto& z = z_[d];
    int* ndk = &n_dk_[d * K];
    for (std::size_t i = 0; i < words.size(); ++i) {
      int* nwk = &n_wk_[idx(words[i], 0)];
      int k = z[i];
      --nwk[k];
      --ndk[k];
      --n_k_[k];

      double total = 0;
      for (std::size_t t = 0; t < K; ++t) {
        total += (ndk[t] + alpha) * (nwk[t] + beta) / (n_k_[t] + vbeta);
        cdf[t] = total;
      }
      const double u = rng.uniform() * total;
      k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (k >= static_cast<int>(K)) k = static_cast<int>(K) - 1;

      z[i] = k;
      ++nwk[k];
      ++ndk[k];
      ++n_k_[k];
    }
  }
}

std::vector<WeightedTerm> LdaModel::top_words(int k, int n) const {
  if (k < 0 || k >= params_.topics) {
    throw IndexError("topic index " + std::to_string(k) + " out of range");
  }
  if (n < 1) throw ParameterError("top_words needs n >= 1");
  const int V = vocab_.size();
  const double denom = n_k_[k] + V * params_.beta;
  std::vector<WeightedTerm> all;
  all.reserve(static_cast<std::size_t>(V));
  for (int w = 0; w < V; ++w) {
    all.push_back({vocab_.term(w), (topic_word(k, w) + params_.beta) / denom});
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(n), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                    [](const WeightedTerm& a, const WeightedTerm& b) {
                      return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
                    });
  all.resize(take);
  return all;
}

std::vector<std::vector<double>> LdaModel::phi() const {
  const int V = vocab_.size();
  std::vector<std::vector<double>> out(K(), std::vector<double>(static_cast<std::size_t>(V)));
  for (int k = 0; k < params_.topics; ++k) {
    const double denom = n_k_[k] + V * params_.beta;
    for (int w = 0; w < V; ++w) out[k][w] = (topic_word(k, w) + params_.beta) / denom;
  }
  return out;
}

std::vector<std::vector<double>> LdaModel::theta() const {
  std::vector<std::vector<double>> out(doc_words_.size(), std::vector<double>(K()));
  for (std::size_t d = 0; d < doc_words_.size(); ++d) {
    const double denom = static_cast<double>(doc_words_[d].size()) + params_.topics * params_.alpha;
    for (int k = 0; k < params_.topics; ++k) {
      out[d][k] = (doc_topic(static_cast<int>(d), k) + params_.alpha) / denom;
    }
  }
  return out;
}

bool LdaModel::counts_consistent() const {
  const std::size_t K = this->K();
  std::vector<int> wk(n_wk_.size(), 0), dk(n_dk_.size(), 0), k_tot(K, 0);
  for (std::size_t d = 0; d < doc_words_.size(); ++d) {
    if (z_[d].size() != doc_words_[d].size()) return false;
    for (std::size_t i = 0; i < z_[d].size(); ++i) {
      const int k = z_[d][i];
      if (k < 0 || k >= params_.topics) return false;
      ++wk[idx(doc_words_[d][i], k)];
      ++dk[d * K + k];
      ++k_tot[k];
    }
  }
  return wk == n_wk_ && dk == n_dk_ && k_tot == n_k_;
}

nlohmann::json LdaModel::to_json(int words_per_topic) const {
  nlohmann::json topics = nlohmann::json::array();
  for (int k = 0; k < params_.topics; ++k) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& tw : top_words(k, words_per_topic)) {
      words.push_back({{"term", tw.term}, {"weight", tw.weight}});
    }
    topics.push_back({{"id", k}, {"words", std::move(words)}});
  }
  return {{"K", params_.topics},
          {"alpha", params_.alpha},
          {"beta", params_.beta},
          {"topics", std::move(topics)}};
}

}  // namespace drivesent
