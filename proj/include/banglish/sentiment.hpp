#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace banglish::sentiment {

inline constexpr int kPadIndex = 0;
inline constexpr int kOovIndex = 1;

// Token -> index map. Index 0 is padding, 1 is out-of-vocabulary; real
// tokens start at 2, ordered by descending training frequency with ties
// broken lexicographically.
struct Vocabulary {
    std::vector<std::string> tokens_by_index; // [0]="<pad>", [1]="<oov>"
    std::unordered_map<std::string, int> index;

    static Vocabulary build(const std::vector<std::string>& texts);
    static Vocabulary from_tokens(const std::vector<std::string>& tokens);

    int lookup(const std::string& folded_token) const;
    std::size_t size() const { return tokens_by_index.size(); }

    bool operator==(const Vocabulary& other) const {
        return tokens_by_index == other.tokens_by_index;
    }
};

struct SentimentConfig {
    int max_sequence_length = 300;
    double embedding_dropout = 0.25;
    double hidden_dropout = 0.5;
    int embedding_dim = 32;
    int hidden_dim = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int epochs = 30;
    int batch_size = 32;
    std::uint64_t seed = 0;

    bool operator==(const SentimentConfig&) const = default;
};

// Mean-pooled embeddings, one relu hidden layer, sigmoid output unit.
struct SentimentModel {
    SentimentConfig config;
    Vocabulary vocab;
    std::vector<double> embedding; // V x D, row-major
    std::vector<double> w1;        // H x D, row-major
    std::vector<double> b1;        // H
    std::vector<double> w2;        // H
    double b2 = 0.0;
    double decision_threshold = 0.5;
};

struct Gradients {
    std::vector<double> embedding, w1, b1, w2;
    double b2 = 0.0;

    static Gradients zeros_like(const SentimentModel& model);
    void zero();
};

// Named views over the five parameter arrays, in a fixed order shared by
// initialization, Adam, serialization, and the gradient check.
struct ParamRef {
    const char* name;
    double* data;
    std::size_t size;
};
std::vector<ParamRef> parameters(SentimentModel& model);
std::vector<ParamRef> parameters(Gradients& grads);

// Case-folds, tokenizes, maps to indices (OOV -> 1), truncates to the first
// max_len tokens, right-pads with 0.
std::vector<int> encode(std::string_view text, const Vocabulary& vocab, int max_len);

// Probability of the positive class, strictly inside (0,1). In train mode,
// inverted dropout (seeded) runs after the embedding mean and after the
// hidden layer; in inference mode the output is deterministic.
double forward(const SentimentModel& model, std::span<const int> sequence,
               bool train_mode = false, std::uint64_t dropout_seed = 0);

// Mean binary cross-entropy over the batch plus parameter gradients.
// dropout_rng is consumed per example in order; pass nullptr (or rates of
// zero) to disable dropout.
double loss_and_gradients(const SentimentModel& model,
                          const std::vector<std::vector<int>>& sequences,
                          const std::vector<int>& labels,
                          Gradients& grads,
                          bool train_mode,
                          std::mt19937_64* dropout_rng);

struct EpochLoss {
    int epoch = 0;
    double loss = 0.0;
};

// Adam on mean BCE. Initialization, batch order, and dropout are all
// deterministic functions of cfg.seed. Labels are 1 = positive, 0 =
// negative; both classes must be present. epochs = 0 returns the
// initialized model untouched.
SentimentModel train(const std::vector<std::pair<std::string, int>>& data,
                     const SentimentConfig& cfg,
                     std::vector<EpochLoss>* loss_log = nullptr);

// Sweeps thresholds over the observed validation probabilities plus 0.5,
// maximizing accuracy with ties broken toward 0.5; stores the winner on the
// model. Single-class validation keeps 0.5.
double calibrate_threshold(SentimentModel& model,
                           const std::vector<std::pair<std::string, int>>& validation);

struct Classification {
    bool positive = false;
    double probability = 0.0;
};

// Positive iff forward(...) >= decision_threshold (boundary inclusive).
Classification classify(const SentimentModel& model, std::string_view text);

// Single JSON document: config, vocabulary, parameter arrays. Loading a
// saved model reproduces its predictions exactly.
void save_model(const SentimentModel& model, const std::string& path);
std::string model_to_json(const SentimentModel& model);
SentimentModel load_model(const std::string& path);

} // namespace banglish::sentiment
