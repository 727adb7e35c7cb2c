// Times the serial matcher kernel against the OpenMP one on a synthetic
// corpus and checks that both produce identical output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "banglish/catalog.hpp"
#include "banglish/ingest.hpp"
#include "banglish/matcher.hpp"
#include "synthetic.hpp"

using namespace banglish;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_results(const std::vector<matcher::CommentAnalysis>& a,
                  const std::vector<matcher::CommentAnalysis>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].comment_id != b[i].comment_id ||
            a[i].correction.corrected_text != b[i].correction.corrected_text ||
            a[i].correction.replacements != b[i].correction.replacements ||
            a[i].entities != b[i].entities) {
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t count = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    int threads = argc > 2 ? std::atoi(argv[2])
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 2) threads = 2;

    catalog::DeviceCatalog cat = synthetic::test_catalog();
    std::vector<synthetic::EmbeddedSentence> corpus =
        synthetic::embedded_corpus(cat, count, true, 7);

    std::vector<ingest::CleanComment> comments;
    comments.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        comments.push_back(ingest::CleanComment{i, "bench", corpus[i].text});
    }

    auto t0 = std::chrono::steady_clock::now();
    auto serial = matcher::process_comments_serial(comments, cat, matcher::MatcherConfig{});
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel = matcher::process_comments(comments, cat, matcher::MatcherConfig{}, threads);
    const double parallel_s = seconds_since(t0);

    if (!same_results(serial, parallel)) {
        std::fprintf(stderr, "FAIL: serial and parallel results differ\n");
        return 1;
    }

    std::printf("comments: %zu, catalog: %zu entries\n", comments.size(), cat.size());
    std::printf("serial:   %8.3f s  (%9.0f comments/s)\n", serial_s,
                static_cast<double>(count) / serial_s);
    std::printf("parallel: %8.3f s  (%9.0f comments/s, %d threads)\n", parallel_s,
                static_cast<double>(count) / parallel_s, threads);
    std::printf("speedup:  %8.2fx\n", serial_s / parallel_s);
    return 0;
}
