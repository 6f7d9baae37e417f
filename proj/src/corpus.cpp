#include "ckws/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ckws/stem.hpp"

namespace ckws {

bool Document::contains(const std::string& kw) const {
    return std::binary_search(keywords.begin(), keywords.end(), kw);
}

std::vector<std::string> extract_keywords(const std::string& text, const ExtractionConfig& cfg) {
    std::vector<std::string> out;
    std::string token;
    auto flush = [&] {
        if (token.size() >= cfg.min_token_len &&
            (!cfg.drop_stopwords || !is_stopword(token))) {
            out.push_back(cfg.stem ? porter_stem(token) : token);
        }
        token.clear();
    };
    for (char c : text) {
        if ((c >= 'a' && c <= 'z')) {
            token.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            token.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            flush();
        }
    }
    flush();
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::string strip_email_headers(const std::string& raw) {
    // Body starts after the first blank line; if there is none, treat the
    // whole file as body (plain text that merely looks like an email).
    size_t pos = 0;
    while (pos < raw.size()) {
        size_t eol = raw.find('\n', pos);
        if (eol == std::string::npos) return raw;
        size_t line_len = eol - pos;
        if (line_len > 0 && raw[eol - 1] == '\r') line_len--;
        if (line_len == 0) return raw.substr(eol + 1);
        pos = eol + 1;
    }
    return raw;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw error("cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw error("read failure on file: " + p.string());
    return ss.str();
}

}  // namespace

Corpus ingest(const std::filesystem::path& directory, const ExtractionConfig& cfg) {
    std::error_code ec;
    if (!std::filesystem::is_directory(directory, ec))
        throw error("ingest: not a directory: " + directory.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (files.empty()) throw error("ingest: no regular files in " + directory.string());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

    Corpus corpus;
    corpus.docs.resize(files.size());
    parallel_for(files.size(), cfg.workers, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            std::string raw = read_file(files[i]);
            if (cfg.email_mode) raw = strip_email_headers(raw);
            Document& d = corpus.docs[i];
            d.doc_id = static_cast<int32_t>(i);
            d.source = files[i].filename().string();
            d.keywords = extract_keywords(raw, cfg);
        }
    });
    for (const Document& d : corpus.docs) {
        if (d.keywords.empty())
            std::cerr << "warning: document yields no keywords: " << d.source << "\n";
    }
    return corpus;
}

size_t distinct_keyword_count(const Corpus& corpus) {
    std::unordered_map<std::string, uint32_t> seen;
    for (const Document& d : corpus.docs)
        for (const std::string& kw : d.keywords) seen.emplace(kw, 0);
    return seen.size();
}

void write_corpus_manifest(const Corpus& corpus, const std::filesystem::path& out) {
    std::ofstream f(out);
    if (!f) throw error("cannot write manifest: " + out.string());
    f << "doc_id,source,keyword_count\n";
    for (const Document& d : corpus.docs)
        f << d.doc_id << "," << d.source << "," << d.keywords.size() << "\n";
}

Vocabulary::Vocabulary(std::vector<std::string> keywords) : keywords_(std::move(keywords)) {
    index_.reserve(keywords_.size());
    for (uint32_t i = 0; i < keywords_.size(); ++i) {
        auto [it, inserted] = index_.emplace(keywords_[i], i);
        if (!inserted) throw error("vocabulary has duplicate keyword: " + keywords_[i]);
    }
}

std::optional<uint32_t> Vocabulary::index_of(const std::string& kw) const {
    auto it = index_.find(kw);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(const Corpus& corpus, uint32_t v) {
    std::unordered_map<std::string, uint32_t> freq;
    for (const Document& d : corpus.docs)
        for (const std::string& kw : d.keywords) freq[kw]++;
    if (v > freq.size())
        throw error("build_vocabulary: requested v=" + std::to_string(v) +
                    " exceeds distinct keyword count " + std::to_string(freq.size()));

    std::vector<std::pair<std::string, uint32_t>> items(freq.begin(), freq.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> top;
    top.reserve(v);
    for (uint32_t i = 0; i < v; ++i) top.push_back(std::move(items[i].first));
    return Vocabulary(std::move(top));
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec) {
    const size_t n = corpus.size();
    if (n == 0) throw error("split: empty corpus");
    rng_t rng(spec.seed);

    auto pick = [&](const std::vector<uint64_t>& idx, size_t count) {
        Corpus c;
        c.docs.reserve(count);
        std::vector<uint64_t> sel(idx.begin(), idx.begin() + static_cast<long>(count));
        std::sort(sel.begin(), sel.end());  // keep original document order
        for (uint64_t i : sel) c.docs.push_back(corpus.docs[i]);
        return c;
    };

    if (spec.mode == SplitMode::similar) {
        if (!(spec.similar_fraction > 0.0 && spec.similar_fraction < 1.0))
            throw error("split: similar_fraction must be in (0,1)");
        size_t n_att = static_cast<size_t>(std::llround(spec.similar_fraction * static_cast<double>(n)));
        if (n_att == 0 || n_att == n)
            throw error("split: similar_fraction leaves one side empty");
        std::vector<uint64_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        deterministic_shuffle(idx, rng);
        Corpus attacker = pick(idx, n_att);
        Corpus real;
        real.docs.reserve(n - n_att);
        std::vector<uint64_t> rest(idx.begin() + static_cast<long>(n_att), idx.end());
        std::sort(rest.begin(), rest.end());
        for (uint64_t i : rest) real.docs.push_back(corpus.docs[i]);
        return {std::move(attacker), std::move(real)};
    }

    if (!(spec.p > 0.0 && spec.p <= 1.0)) throw error("split: p must be in (0,1]");
    size_t n_known = static_cast<size_t>(std::llround(spec.p * static_cast<double>(n)));
    if (n_known == 0) throw error("split: p yields an empty attacker set");
    std::vector<uint64_t> draw = sample_without_replacement(n, n_known, rng);
    Corpus attacker = pick(draw, n_known);
    return {std::move(attacker), corpus};
}

Postings::Postings(const Corpus& corpus, const Vocabulary& vocab)
    : n_docs_(static_cast<uint32_t>(corpus.size())), words_((corpus.size() + 63) / 64) {
    bits_.assign(static_cast<size_t>(vocab.size()) * words_, 0);
    for (uint32_t doc = 0; doc < corpus.size(); ++doc) {
        for (const std::string& kw : corpus.docs[doc].keywords) {
            if (auto idx = vocab.index_of(kw)) {
                bits_[*idx * words_ + doc / 64] |= uint64_t(1) << (doc % 64);
            }
        }
    }
}

}  // namespace ckws
