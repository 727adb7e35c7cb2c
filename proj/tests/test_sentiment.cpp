#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "banglish/errors.hpp"
#include "banglish/rng.hpp"
#include "banglish/sentiment.hpp"
#include "tempdir.hpp"

using namespace banglish;
using sentiment::SentimentConfig;
using sentiment::SentimentModel;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Fixed pseudo-random parameters, large enough that the relu layer has both
// active and inactive units across the batch.
void fill_pattern(SentimentModel& model) {
    std::mt19937_64 gen(42);
    for (auto& p : sentiment::parameters(model)) {
        for (std::size_t i = 0; i < p.size; ++i) {
            p.data[i] = rng::uniform(gen, -0.6, 0.6);
        }
    }
}

SentimentModel micro_model() {
    SentimentModel model;
    model.config.max_sequence_length = 4;
    model.config.embedding_dim = 2;
    model.config.hidden_dim = 2;
    model.config.embedding_dropout = 0.0;
    model.config.hidden_dropout = 0.0;
    model.vocab = sentiment::Vocabulary::from_tokens({"valo", "kharap", "phone"});
    model.embedding.assign(model.vocab.size() * 2, 0.0);
    model.w1.assign(2 * 2, 0.0);
    model.b1.assign(2, 0.0);
    model.w2.assign(2, 0.0);
    model.b2 = 0.0;
    fill_pattern(model);
    return model;
}

// Mixed batch: normal, OOV-heavy, all-padding, single-token.
const std::vector<std::vector<int>> kSequences = {
    {2, 3, 4, 0}, {1, 1, 2, 0}, {0, 0, 0, 0}, {4, 0, 0, 0}};
const std::vector<int> kLabels = {1, 0, 1, 0};

std::vector<std::pair<std::string, int>> separable_fixture(int per_class) {
    std::vector<std::pair<std::string, int>> data;
    for (int i = 0; i < per_class; ++i) {
        data.emplace_back("ei phone ta valo c" + std::to_string(i % 7), 1);
        data.emplace_back("ei phone ta kharap c" + std::to_string(i % 7), 0);
    }
    return data;
}

} // namespace

// The analytic gradients are the foundation everything else rests on, so
// they are checked against central finite differences before anything else.
TEST_CASE("analytic gradients match central finite differences") {
    SentimentModel model = micro_model();
    sentiment::Gradients grads = sentiment::Gradients::zeros_like(model);
    sentiment::loss_and_gradients(model, kSequences, kLabels, grads, false, nullptr);

    // The check is only meaningful when the hidden layer is not dead.
    REQUIRE(std::any_of(grads.w1.begin(), grads.w1.end(), [](double g) { return g != 0.0; }));

    auto params = sentiment::parameters(model);
    auto grad_views = sentiment::parameters(grads);
    REQUIRE(params.size() == grad_views.size());

    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        REQUIRE(params[p].size == grad_views[p].size);
        for (std::size_t i = 0; i < params[p].size; ++i) {
            double saved = params[p].data[i];
            sentiment::Gradients scratch = sentiment::Gradients::zeros_like(model);

            params[p].data[i] = saved + h;
            double up = sentiment::loss_and_gradients(model, kSequences, kLabels, scratch,
                                                      false, nullptr);
            params[p].data[i] = saved - h;
            double down = sentiment::loss_and_gradients(model, kSequences, kLabels, scratch,
                                                        false, nullptr);
            params[p].data[i] = saved;

            double numeric = (up - down) / (2.0 * h);
            double analytic = grad_views[p].data[i];
            double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
            double rel = std::abs(numeric - analytic) / scale;
            if (std::abs(numeric) < 1e-12 && std::abs(analytic) < 1e-12) rel = 0.0;
            CAPTURE(params[p].name);
            CAPTURE(i);
            CHECK(rel < 1e-4);
            max_rel = std::max(max_rel, rel);
        }
    }
    CHECK(max_rel < 1e-4);
}

TEST_CASE("padding embedding row receives zero gradient") {
    SentimentModel model = micro_model();
    sentiment::Gradients grads = sentiment::Gradients::zeros_like(model);
    sentiment::loss_and_gradients(model, kSequences, kLabels, grads, false, nullptr);
    const int d = model.config.embedding_dim;
    for (int j = 0; j < d; ++j) CHECK(grads.embedding[static_cast<std::size_t>(j)] == 0.0);
}

TEST_CASE("vocabulary orders by frequency then lexicographically") {
    auto vocab = sentiment::Vocabulary::build({"valo valo kharap", "valo phone"});
    REQUIRE(vocab.size() == 5);
    CHECK(vocab.tokens_by_index[0] == "<pad>");
    CHECK(vocab.tokens_by_index[1] == "<oov>");
    CHECK(vocab.tokens_by_index[2] == "valo");   // freq 3
    CHECK(vocab.tokens_by_index[3] == "kharap"); // freq 1, tie broken by name
    CHECK(vocab.tokens_by_index[4] == "phone");
    CHECK(vocab.lookup("valo") == 2);
    CHECK(vocab.lookup("zzz") == sentiment::kOovIndex);
}

TEST_CASE("encode pads, truncates, folds case, and maps OOV to 1") {
    auto vocab = sentiment::Vocabulary::from_tokens({"valo", "kharap"});
    CHECK(sentiment::encode("valo kharap", vocab, 5) == std::vector<int>{2, 3, 0, 0, 0});
    CHECK(sentiment::encode("VALO!", vocab, 3) == std::vector<int>{2, 0, 0});
    CHECK(sentiment::encode("zzz valo", vocab, 3) == std::vector<int>{1, 2, 0});
    CHECK(sentiment::encode("", vocab, 3) == std::vector<int>{0, 0, 0});

    std::string long_text;
    for (int i = 0; i < 400; ++i) long_text += i % 2 ? "valo " : "kharap ";
    auto seq = sentiment::encode(long_text, vocab, 300);
    REQUIRE(seq.size() == 300);
    CHECK(seq.front() == 3);
    for (int idx : seq) CHECK(idx != 0); // fully occupied, first 300 tokens kept
}

TEST_CASE("forward with all-zero parameters is 0.5") {
    SentimentModel model = micro_model();
    for (auto& p : sentiment::parameters(model)) {
        for (std::size_t i = 0; i < p.size; ++i) p.data[i] = 0.0;
    }
    CHECK(sentiment::forward(model, std::vector<int>{2, 3, 0, 0}) == doctest::Approx(0.5));
    CHECK(sentiment::forward(model, std::vector<int>{0, 0, 0, 0}) == doctest::Approx(0.5));
}

TEST_CASE("forward matches the hand-computed closed form") {
    SentimentModel model;
    model.config.max_sequence_length = 4;
    model.config.embedding_dim = 2;
    model.config.hidden_dim = 2;
    model.vocab = sentiment::Vocabulary::from_tokens({"a", "b"});
    model.embedding = {0, 0, 0, 0, 0.1, -0.2, 0.3, 0.4}; // rows: pad, oov, a, b
    model.w1 = {0.5, -0.1, 0.2, 0.3};
    model.b1 = {0.01, -0.02};
    model.w2 = {0.7, -0.5};
    model.b2 = 0.05;

    // mean of a,b rows = (0.2, 0.1); pre = (0.10, 0.05); both positive under relu;
    // z = 0.7*0.10 - 0.5*0.05 + 0.05 = 0.095.
    auto seq = sentiment::encode("a b", model.vocab, 4);
    CHECK(sentiment::forward(model, seq) ==
          doctest::Approx(sigmoid(0.095)).epsilon(1e-9));

    // All padding: mean is the zero vector, pre = b1, relu kills the negative unit;
    // z = 0.7*0.01 + 0.05 = 0.057.
    CHECK(sentiment::forward(model, std::vector<int>{0, 0, 0, 0}) ==
          doctest::Approx(sigmoid(0.057)).epsilon(1e-9));

    // relu gate: negative hidden unit contributes nothing.
    model.w2 = {0.0, -0.5};
    model.b2 = 0.0;
    model.b1 = {0.01, -5.0};
    CHECK(sentiment::forward(model, std::vector<int>{0, 0, 0, 0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dropout is seeded and inference ignores it") {
    // Hand-built so both hidden units are active: every mask changes z.
    SentimentModel model;
    model.config.max_sequence_length = 4;
    model.config.embedding_dim = 2;
    model.config.hidden_dim = 2;
    model.config.embedding_dropout = 0.25;
    model.config.hidden_dropout = 0.5;
    model.vocab = sentiment::Vocabulary::from_tokens({"valo", "kharap", "phone"});
    model.embedding = {0, 0, 0, 0, 0.3, 0.9, 0.6, 0.3, 0.9, 0.6};
    model.w1 = {1.0, 0.0, 0.0, 1.0};
    model.b1 = {0.5, 0.5};
    model.w2 = {1.0, -0.5};
    model.b2 = 0.1;
    std::vector<int> seq = {2, 3, 4, 0};

    double a = sentiment::forward(model, seq, true, 11);
    double b = sentiment::forward(model, seq, true, 11);
    CHECK(a == b);

    // Inference output is independent of the dropout seed.
    CHECK(sentiment::forward(model, seq, false, 1) == sentiment::forward(model, seq, false, 2));

    // Some seed produces a different train-mode output (the masks do bite).
    bool differs = false;
    for (std::uint64_t s = 0; s < 32 && !differs; ++s) {
        differs = sentiment::forward(model, seq, true, s) != a;
    }
    CHECK(differs);
}

TEST_CASE("train learns the separable fixture deterministically") {
    auto data = separable_fixture(100);
    SentimentConfig cfg;
    cfg.max_sequence_length = 16;
    cfg.embedding_dim = 16;
    cfg.hidden_dim = 16;
    cfg.epochs = 30;
    cfg.seed = 5;

    std::vector<sentiment::EpochLoss> losses;
    SentimentModel model = sentiment::train(data, cfg, &losses);
    REQUIRE(losses.size() == 30);
    CHECK(losses[0].epoch == 1);

    // Loss decreases and stays finite.
    for (const auto& e : losses) CHECK(std::isfinite(e.loss));
    CHECK(losses[9].loss < losses[0].loss);

    std::size_t correct = 0;
    for (const auto& [t, y] : data) {
        auto c = sentiment::classify(model, t);
        if (c.positive == (y == 1)) ++correct;
    }
    CHECK(static_cast<double>(correct) >= 0.95 * static_cast<double>(data.size()));

    // Bit-identical across runs with the same seed.
    SentimentModel again = sentiment::train(data, cfg);
    CHECK(sentiment::model_to_json(model) == sentiment::model_to_json(again));

    // A different seed changes the parameters.
    cfg.seed = 6;
    SentimentModel other = sentiment::train(data, cfg);
    CHECK(sentiment::model_to_json(other) != sentiment::model_to_json(model));
}

TEST_CASE("train with epochs=0 returns the seeded initialization") {
    auto data = separable_fixture(4);
    SentimentConfig cfg;
    cfg.max_sequence_length = 8;
    cfg.embedding_dim = 4;
    cfg.hidden_dim = 4;
    cfg.epochs = 0;
    cfg.seed = 9;
    std::vector<sentiment::EpochLoss> losses;
    SentimentModel a = sentiment::train(data, cfg, &losses);
    SentimentModel b = sentiment::train(data, cfg);
    CHECK(losses.empty());
    CHECK(sentiment::model_to_json(a) == sentiment::model_to_json(b));
    for (double v : a.embedding) {
        CHECK(v >= -0.05);
        CHECK(v <= 0.05);
    }
}

TEST_CASE("train rejects single-class data") {
    std::vector<std::pair<std::string, int>> pos_only = {{"valo", 1}, {"darun", 1}};
    CHECK_THROWS_AS(sentiment::train(pos_only, SentimentConfig{}), DataError);
    CHECK_THROWS_AS(sentiment::train({}, SentimentConfig{}), DataError);
}

TEST_CASE("calibrate_threshold ties break toward 0.5") {
    // One clearly-negative and one clearly-positive example: thresholds 0.5 and
    // p_high are equally accurate; 0.5 wins the tie.
    SentimentModel model;
    model.config.max_sequence_length = 2;
    model.config.embedding_dim = 1;
    model.config.hidden_dim = 1;
    model.vocab = sentiment::Vocabulary::from_tokens({"a", "b"});
    model.embedding = {0, 0, -2, 2}; // rows: pad, oov, a, b
    model.w1 = {1.0};
    model.b1 = {3.0};
    model.w2 = {1.0};
    model.b2 = -3.0;
    // p("a") = sigmoid(-2) ~ 0.12, p("b") = sigmoid(2) ~ 0.88.

    double threshold = sentiment::calibrate_threshold(model, {{"a", 0}, {"b", 1}});
    CHECK(threshold == doctest::Approx(0.5));
    CHECK(model.decision_threshold == doctest::Approx(0.5));
}

TEST_CASE("calibrate_threshold picks the observed separating probability") {
    SentimentModel model;
    model.config.max_sequence_length = 2;
    model.config.embedding_dim = 1;
    model.config.hidden_dim = 1;
    model.vocab = sentiment::Vocabulary::from_tokens({"n1", "n2", "p1", "p2"});
    auto logit = [](double p) { return std::log(p / (1.0 - p)); };
    // Probabilities 0.30, 0.65 for negatives and 0.70, 0.90 for positives:
    // only a threshold in (0.65, 0.70] classifies all four correctly.
    model.embedding = {0, 0, logit(0.30), logit(0.65), logit(0.70), logit(0.90)};
    model.w1 = {1.0};
    model.b1 = {100.0}; // keeps relu in its linear region
    model.w2 = {1.0};
    model.b2 = -100.0;

    std::vector<std::pair<std::string, int>> validation = {
        {"n1", 0}, {"n2", 0}, {"p1", 1}, {"p2", 1}};
    double expected = sentiment::forward(
        model, sentiment::encode("p1", model.vocab, model.config.max_sequence_length));
    double threshold = sentiment::calibrate_threshold(model, validation);
    CHECK(threshold == expected);

    // Boundary inclusive: the example sitting exactly on the threshold is Positive.
    auto c = sentiment::classify(model, "p1");
    CHECK(c.positive);
    CHECK(c.probability == expected);
}

TEST_CASE("calibrate_threshold keeps 0.5 on single-class validation") {
    SentimentModel model = micro_model();
    model.decision_threshold = 0.5;
    CHECK(sentiment::calibrate_threshold(model, {{"valo", 1}, {"phone", 1}}) == 0.5);
    CHECK(model.decision_threshold == 0.5);
    CHECK_THROWS_AS(sentiment::calibrate_threshold(model, {}), DataError);
}

TEST_CASE("classify applies the stored threshold") {
    SentimentModel model = micro_model();
    std::vector<int> seq = sentiment::encode("valo", model.vocab, 4);
    double p = sentiment::forward(model, seq);

    model.decision_threshold = p; // boundary: inclusive
    CHECK(sentiment::classify(model, "valo").positive);
    model.decision_threshold = std::nextafter(p, 1.0);
    CHECK_FALSE(sentiment::classify(model, "valo").positive);
    model.decision_threshold = 0.0;
    CHECK(sentiment::classify(model, "valo").positive);
}

TEST_CASE("model JSON round-trips bit-exactly") {
    auto data = separable_fixture(10);
    SentimentConfig cfg;
    cfg.max_sequence_length = 12;
    cfg.embedding_dim = 6;
    cfg.hidden_dim = 5;
    cfg.epochs = 3;
    cfg.seed = 21;
    SentimentModel model = sentiment::train(data, cfg);
    sentiment::calibrate_threshold(model, data);

    test::TempDir dir;
    auto path = dir.file("model.json");
    sentiment::save_model(model, path);
    SentimentModel loaded = sentiment::load_model(path);

    CHECK(loaded.config == model.config);
    CHECK(loaded.vocab == model.vocab);
    CHECK(loaded.embedding == model.embedding);
    CHECK(loaded.w1 == model.w1);
    CHECK(loaded.b1 == model.b1);
    CHECK(loaded.w2 == model.w2);
    CHECK(loaded.b2 == model.b2);
    CHECK(loaded.decision_threshold == model.decision_threshold);

    for (const char* t : {"ei phone ta valo c1", "ei phone ta kharap c2", "onno kichu"}) {
        auto a = sentiment::classify(model, t);
        auto b = sentiment::classify(loaded, t);
        CHECK(a.positive == b.positive);
        CHECK(a.probability == b.probability); // bit-exact
    }
}

TEST_CASE("load_model rejects corrupt files") {
    test::TempDir dir;
    CHECK_THROWS_AS(sentiment::load_model(dir.write("a.json", "{")), DataError);
    CHECK_THROWS_AS(sentiment::load_model(dir.write("b.json", "[1,2]")), DataError);
    CHECK_THROWS_AS(sentiment::load_model(dir.file("absent.json")), InputError);

    // Shape mismatch: vocabulary of 3 but embedding sized for 2 rows.
    auto model = micro_model();
    auto text = sentiment::model_to_json(model);
    auto cut = text.find("\"embedding\"");
    REQUIRE(cut != std::string::npos);
    auto truncated = dir.write("c.json", [&] {
        auto json_text = text;
        auto open = json_text.find('[', cut);
        auto close = json_text.find(']', open);
        json_text.replace(open, close - open + 1, "[0.0, 0.0]");
        return json_text;
    }());
    CHECK_THROWS_AS(sentiment::load_model(truncated), DataError);
}

TEST_CASE("forward stays strictly inside (0,1)") {
    SentimentModel model = micro_model();
    for (auto& p : sentiment::parameters(model)) {
        for (std::size_t i = 0; i < p.size; ++i) p.data[i] = (i % 2 ? 40.0 : -40.0);
    }
    for (const auto& seq : kSequences) {
        double p = sentiment::forward(model, seq);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}
