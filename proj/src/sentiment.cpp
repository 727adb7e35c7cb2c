#include "banglish/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "banglish/errors.hpp"
#include "banglish/rng.hpp"
#include "banglish/textprep.hpp"

namespace banglish::sentiment {

using nlohmann::json;

Vocabulary Vocabulary::build(const std::vector<std::string>& texts) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const std::string& t : texts) {
        for (const text::Token& tok : text::word_tokenize(t)) {
            ++counts[text::normalize_case(tok.text)];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> tokens;
    tokens.reserve(ordered.size());
    for (auto& [tok, n] : ordered) tokens.push_back(std::move(tok));
    return from_tokens(tokens);
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
    Vocabulary v;
    v.tokens_by_index = {"<pad>", "<oov>"};
    for (const std::string& t : tokens) v.tokens_by_index.push_back(t);
    for (std::size_t i = 2; i < v.tokens_by_index.size(); ++i) {
        v.index.emplace(v.tokens_by_index[i], static_cast<int>(i));
    }
    return v;
}

int Vocabulary::lookup(const std::string& folded_token) const {
    auto it = index.find(folded_token);
    return it == index.end() ? kOovIndex : it->second;
}

Gradients Gradients::zeros_like(const SentimentModel& model) {
    Gradients g;
    g.embedding.assign(model.embedding.size(), 0.0);
    g.w1.assign(model.w1.size(), 0.0);
    g.b1.assign(model.b1.size(), 0.0);
    g.w2.assign(model.w2.size(), 0.0);
    g.b2 = 0.0;
    return g;
}

void Gradients::zero() {
    std::fill(embedding.begin(), embedding.end(), 0.0);
    std::fill(w1.begin(), w1.end(), 0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    b2 = 0.0;
}

std::vector<ParamRef> parameters(SentimentModel& m) {
    return {{"embedding", m.embedding.data(), m.embedding.size()},
            {"w1", m.w1.data(), m.w1.size()},
            {"b1", m.b1.data(), m.b1.size()},
            {"w2", m.w2.data(), m.w2.size()},
            {"b2", &m.b2, 1}};
}

std::vector<ParamRef> parameters(Gradients& g) {
    return {{"embedding", g.embedding.data(), g.embedding.size()},
            {"w1", g.w1.data(), g.w1.size()},
            {"b1", g.b1.data(), g.b1.size()},
            {"w2", g.w2.data(), g.w2.size()},
            {"b2", &g.b2, 1}};
}

std::vector<int> encode(std::string_view text_in, const Vocabulary& vocab, int max_len) {
    std::vector<int> seq(static_cast<std::size_t>(max_len), kPadIndex);
    std::size_t pos = 0;
    for (const text::Token& tok : text::word_tokenize(text_in)) {
        if (pos >= seq.size()) break;
        seq[pos++] = vocab.lookup(text::normalize_case(tok.text));
    }
    return seq;
}

namespace {

double sigmoid(double z) {
    if (z >= 0) {
        // Large z rounds to exactly 1.0 in doubles; keep the documented
        // open-interval contract.
        double p = 1.0 / (1.0 + std::exp(-z));
        return p < 1.0 ? p : std::nextafter(1.0, 0.0);
    }
    double e = std::exp(z); // subnormal but nonzero even for very negative z
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct ForwardScratch {
    std::vector<double> mean;           // D, before dropout
    std::vector<double> mean_dropped;   // D
    std::vector<double> emb_mask;       // D, inverted-dropout scale per unit
    std::vector<double> pre_hidden;     // H
    std::vector<double> hidden_dropped; // H, relu then dropout
    std::vector<double> hid_mask;       // H
    std::vector<int> nonpad;            // token indices contributing to mean
    double z = 0.0;
    double p = 0.5;
};

void draw_mask(std::vector<double>& mask, std::size_t n, double rate, bool train_mode,
               std::mt19937_64* gen) {
    mask.assign(n, 1.0);
    if (!train_mode || rate <= 0.0 || gen == nullptr) return;
    const double scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < n; ++i) {
        mask[i] = rng::unit(*gen) < rate ? 0.0 : scale;
    }
}

void forward_pass(const SentimentModel& m, std::span<const int> seq, bool train_mode,
                  std::mt19937_64* gen, ForwardScratch& s) {
    const std::size_t D = static_cast<std::size_t>(m.config.embedding_dim);
    const std::size_t H = static_cast<std::size_t>(m.config.hidden_dim);

    s.nonpad.clear();
    s.mean.assign(D, 0.0);
    for (int idx : seq) {
        if (idx == kPadIndex) continue;
        s.nonpad.push_back(idx);
        const double* row = m.embedding.data() + static_cast<std::size_t>(idx) * D;
        for (std::size_t d = 0; d < D; ++d) s.mean[d] += row[d];
    }
    if (!s.nonpad.empty()) {
        const double inv = 1.0 / static_cast<double>(s.nonpad.size());
        for (std::size_t d = 0; d < D; ++d) s.mean[d] *= inv;
    }

    draw_mask(s.emb_mask, D, m.config.embedding_dropout, train_mode, gen);
    s.mean_dropped.resize(D);
    for (std::size_t d = 0; d < D; ++d) s.mean_dropped[d] = s.mean[d] * s.emb_mask[d];

    s.pre_hidden.assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        double acc = m.b1[h];
        const double* row = m.w1.data() + h * D;
        for (std::size_t d = 0; d < D; ++d) acc += row[d] * s.mean_dropped[d];
        s.pre_hidden[h] = acc;
    }

    draw_mask(s.hid_mask, H, m.config.hidden_dropout, train_mode, gen);
    s.hidden_dropped.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        double relu = s.pre_hidden[h] > 0 ? s.pre_hidden[h] : 0.0;
        s.hidden_dropped[h] = relu * s.hid_mask[h];
    }

    double z = m.b2;
    for (std::size_t h = 0; h < H; ++h) z += m.w2[h] * s.hidden_dropped[h];
    s.z = z;
    s.p = sigmoid(z);
}

} // namespace

double forward(const SentimentModel& model, std::span<const int> sequence,
               bool train_mode, std::uint64_t dropout_seed) {
    ForwardScratch s;
    if (train_mode) {
        std::mt19937_64 gen(dropout_seed);
        forward_pass(model, sequence, true, &gen, s);
    } else {
        forward_pass(model, sequence, false, nullptr, s);
    }
    return s.p;
}

double loss_and_gradients(const SentimentModel& model,
                          const std::vector<std::vector<int>>& sequences,
                          const std::vector<int>& labels,
                          Gradients& grads,
                          bool train_mode,
                          std::mt19937_64* dropout_rng) {
    const std::size_t D = static_cast<std::size_t>(model.config.embedding_dim);
    const std::size_t H = static_cast<std::size_t>(model.config.hidden_dim);
    const std::size_t B = sequences.size();

    grads.zero();
    double total_loss = 0.0;
    ForwardScratch s;
    std::vector<double> g_pre(H);
    std::vector<double> g_mean(D);

    for (std::size_t ex = 0; ex < B; ++ex) {
        forward_pass(model, sequences[ex], train_mode, dropout_rng, s);
        const double y = static_cast<double>(labels[ex]);
        total_loss += softplus(s.z) - y * s.z;

        const double dz = (s.p - y) / static_cast<double>(B);

        grads.b2 += dz;
        for (std::size_t h = 0; h < H; ++h) {
            grads.w2[h] += dz * s.hidden_dropped[h];
            double g_hidden = dz * model.w2[h] * s.hid_mask[h];
            g_pre[h] = s.pre_hidden[h] > 0 ? g_hidden : 0.0;
            grads.b1[h] += g_pre[h];
        }
        for (std::size_t h = 0; h < H; ++h) {
            if (g_pre[h] == 0.0) continue;
            double* g_row = grads.w1.data() + h * D;
            for (std::size_t d = 0; d < D; ++d) g_row[d] += g_pre[h] * s.mean_dropped[d];
        }
        for (std::size_t d = 0; d < D; ++d) {
            double acc = 0.0;
            for (std::size_t h = 0; h < H; ++h) {
                acc += g_pre[h] * model.w1[h * D + d];
            }
            g_mean[d] = acc * s.emb_mask[d];
        }
        if (!s.nonpad.empty()) {
            const double inv = 1.0 / static_cast<double>(s.nonpad.size());
            for (int idx : s.nonpad) {
                double* g_row = grads.embedding.data() + static_cast<std::size_t>(idx) * D;
                for (std::size_t d = 0; d < D; ++d) g_row[d] += g_mean[d] * inv;
            }
        }
    }
    return B == 0 ? 0.0 : total_loss / static_cast<double>(B);
}

namespace {

struct AdamState {
    std::vector<double> m_embedding, v_embedding, m_w1, v_w1, m_b1, v_b1, m_w2, v_w2;
    double m_b2 = 0.0, v_b2 = 0.0;
    long t = 0;

    static AdamState zeros_like(const SentimentModel& model) {
        AdamState st;
        st.m_embedding.assign(model.embedding.size(), 0.0);
        st.v_embedding.assign(model.embedding.size(), 0.0);
        st.m_w1.assign(model.w1.size(), 0.0);
        st.v_w1.assign(model.w1.size(), 0.0);
        st.m_b1.assign(model.b1.size(), 0.0);
        st.v_b1.assign(model.b1.size(), 0.0);
        st.m_w2.assign(model.w2.size(), 0.0);
        st.v_w2.assign(model.w2.size(), 0.0);
        return st;
    }
};

void adam_step(SentimentModel& model, Gradients& grads, AdamState& st) {
    const SentimentConfig& c = model.config;
    st.t += 1;
    const double bc1 = 1.0 - std::pow(c.adam_beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(c.adam_beta2, static_cast<double>(st.t));

    auto update = [&](double* w, const double* g, double* m, double* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = c.adam_beta1 * m[i] + (1.0 - c.adam_beta1) * g[i];
            v[i] = c.adam_beta2 * v[i] + (1.0 - c.adam_beta2) * g[i] * g[i];
            double mhat = m[i] / bc1;
            double vhat = v[i] / bc2;
            w[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.adam_epsilon);
        }
    };
    update(model.embedding.data(), grads.embedding.data(), st.m_embedding.data(),
           st.v_embedding.data(), model.embedding.size());
    update(model.w1.data(), grads.w1.data(), st.m_w1.data(), st.v_w1.data(), model.w1.size());
    update(model.b1.data(), grads.b1.data(), st.m_b1.data(), st.v_b1.data(), model.b1.size());
    update(model.w2.data(), grads.w2.data(), st.m_w2.data(), st.v_w2.data(), model.w2.size());
    update(&model.b2, &grads.b2, &st.m_b2, &st.v_b2, 1);
}

} // namespace

SentimentModel train(const std::vector<std::pair<std::string, int>>& data,
                     const SentimentConfig& cfg,
                     std::vector<EpochLoss>* loss_log) {
    bool has_pos = false;
    bool has_neg = false;
    for (const auto& [t, y] : data) {
        (y != 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw DataError("training data must contain both classes");
    }

    SentimentModel model;
    model.config = cfg;
    std::vector<std::string> texts;
    texts.reserve(data.size());
    for (const auto& [t, y] : data) texts.push_back(t);
    model.vocab = Vocabulary::build(texts);

    const std::size_t V = model.vocab.size();
    const std::size_t D = static_cast<std::size_t>(cfg.embedding_dim);
    const std::size_t H = static_cast<std::size_t>(cfg.hidden_dim);
    model.embedding.resize(V * D);
    model.w1.resize(H * D);
    model.b1.resize(H);
    model.w2.resize(H);

    // Separate deterministic streams for init, batch order, dropout.
    std::mt19937_64 init_gen(cfg.seed);
    std::mt19937_64 shuffle_gen(cfg.seed + 1);
    std::mt19937_64 dropout_gen(cfg.seed + 2);

    for (ParamRef p : parameters(model)) {
        for (std::size_t i = 0; i < p.size; ++i) {
            p.data[i] = rng::uniform(init_gen, -0.05, 0.05);
        }
    }

    std::vector<std::vector<int>> encoded;
    std::vector<int> labels;
    encoded.reserve(data.size());
    labels.reserve(data.size());
    for (const auto& [t, y] : data) {
        encoded.push_back(encode(t, model.vocab, cfg.max_sequence_length));
        labels.push_back(y != 0 ? 1 : 0);
    }

    AdamState adam = AdamState::zeros_like(model);
    Gradients grads = Gradients::zeros_like(model);
    const std::size_t n = data.size();
    const std::size_t batch_size = cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size) : n;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng::shuffle(order, shuffle_gen);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t stop = std::min(n, start + batch_size);
            std::vector<std::vector<int>> batch_seqs;
            std::vector<int> batch_labels;
            batch_seqs.reserve(stop - start);
            batch_labels.reserve(stop - start);
            for (std::size_t k = start; k < stop; ++k) {
                batch_seqs.push_back(encoded[order[k]]);
                batch_labels.push_back(labels[order[k]]);
            }
            double batch_loss = loss_and_gradients(model, batch_seqs, batch_labels, grads,
                                                   true, &dropout_gen);
            adam_step(model, grads, adam);
            epoch_loss += batch_loss * static_cast<double>(stop - start);
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            throw DataError("training loss diverged at epoch " + std::to_string(epoch));
        }
        if (loss_log) loss_log->push_back(EpochLoss{epoch, epoch_loss});
    }
    return model;
}

double calibrate_threshold(SentimentModel& model,
                           const std::vector<std::pair<std::string, int>>& validation) {
    if (validation.empty()) throw DataError("validation set is empty");

    bool has_pos = false;
    bool has_neg = false;
    std::vector<double> probs;
    std::vector<int> labels;
    probs.reserve(validation.size());
    for (const auto& [t, y] : validation) {
        std::vector<int> seq = encode(t, model.vocab, model.config.max_sequence_length);
        probs.push_back(forward(model, seq));
        labels.push_back(y != 0 ? 1 : 0);
        (y != 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        model.decision_threshold = 0.5;
        return 0.5;
    }

    std::vector<double> candidates = probs;
    candidates.push_back(0.5);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    double best_threshold = 0.5;
    std::size_t best_correct = 0;
    double best_dist = 0.0;
    bool first = true;
    for (double threshold : candidates) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            bool positive = probs[i] >= threshold;
            if (positive == (labels[i] == 1)) ++correct;
        }
        double dist = std::abs(threshold - 0.5);
        if (first || correct > best_correct ||
            (correct == best_correct && dist < best_dist) ||
            (correct == best_correct && dist == best_dist && threshold < best_threshold)) {
            best_threshold = threshold;
            best_correct = correct;
            best_dist = dist;
            first = false;
        }
    }
    model.decision_threshold = best_threshold;
    return best_threshold;
}

Classification classify(const SentimentModel& model, std::string_view text_in) {
    std::vector<int> seq = encode(text_in, model.vocab, model.config.max_sequence_length);
    double p = forward(model, seq);
    return Classification{p >= model.decision_threshold, p};
}

namespace {

json config_to_json(const SentimentConfig& c) {
    return {{"architecture", "mean-pool-v1"},
            {"max_sequence_length", c.max_sequence_length},
            {"embedding_dropout", c.embedding_dropout},
            {"hidden_dropout", c.hidden_dropout},
            {"embedding_dim", c.embedding_dim},
            {"hidden_dim", c.hidden_dim},
            {"learning_rate", c.learning_rate},
            {"adam_beta1", c.adam_beta1},
            {"adam_beta2", c.adam_beta2},
            {"adam_epsilon", c.adam_epsilon},
            {"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"seed", c.seed}};
}

SentimentConfig config_from_json(const json& j) {
    SentimentConfig c;
    c.max_sequence_length = j.at("max_sequence_length").get<int>();
    c.embedding_dropout = j.at("embedding_dropout").get<double>();
    c.hidden_dropout = j.at("hidden_dropout").get<double>();
    c.embedding_dim = j.at("embedding_dim").get<int>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.adam_beta1 = j.at("adam_beta1").get<double>();
    c.adam_beta2 = j.at("adam_beta2").get<double>();
    c.adam_epsilon = j.at("adam_epsilon").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

} // namespace

std::string model_to_json(const SentimentModel& model) {
    json doc;
    doc["config"] = config_to_json(model.config);
    doc["vocabulary"] = model.vocab.tokens_by_index;
    doc["embedding"] = model.embedding;
    doc["w1"] = model.w1;
    doc["b1"] = model.b1;
    doc["w2"] = model.w2;
    doc["b2"] = model.b2;
    doc["decision_threshold"] = model.decision_threshold;
    return doc.dump(2) + "\n";
}

void save_model(const SentimentModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write model file: " + path);
    out << model_to_json(model);
    if (!out) throw InputError("cannot write model file: " + path);
}

SentimentModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw DataError("bad JSON in model file " + path + ": " + e.what());
    }

    SentimentModel model;
    try {
        model.config = config_from_json(doc.at("config"));
        std::vector<std::string> tokens = doc.at("vocabulary").get<std::vector<std::string>>();
        if (tokens.size() < 2) throw DataError("vocabulary too small in " + path);
        model.vocab.tokens_by_index = std::move(tokens);
        for (std::size_t i = 2; i < model.vocab.tokens_by_index.size(); ++i) {
            model.vocab.index.emplace(model.vocab.tokens_by_index[i], static_cast<int>(i));
        }
        model.embedding = doc.at("embedding").get<std::vector<double>>();
        model.w1 = doc.at("w1").get<std::vector<double>>();
        model.b1 = doc.at("b1").get<std::vector<double>>();
        model.w2 = doc.at("w2").get<std::vector<double>>();
        model.b2 = doc.at("b2").get<double>();
        model.decision_threshold = doc.at("decision_threshold").get<double>();
    } catch (const json::exception& e) {
        throw DataError("bad model file " + path + ": " + e.what());
    }

    const std::size_t V = model.vocab.size();
    const std::size_t D = static_cast<std::size_t>(model.config.embedding_dim);
    const std::size_t H = static_cast<std::size_t>(model.config.hidden_dim);
    if (model.embedding.size() != V * D || model.w1.size() != H * D ||
        model.b1.size() != H || model.w2.size() != H) {
        throw DataError("parameter shapes do not match config in " + path);
    }
    return model;
}

} // namespace banglish::sentiment
