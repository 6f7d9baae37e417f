#include "ckws/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ckws {
namespace {

// SipHash-2-4, public domain reference construction.
struct SipHash {
    uint64_t v0, v1, v2, v3;

    explicit SipHash(uint64_t k0, uint64_t k1) {
        v0 = 0x736f6d6570736575ULL ^ k0;
        v1 = 0x646f72616e646f6dULL ^ k1;
        v2 = 0x6c7967656e657261ULL ^ k0;
        v3 = 0x7465646279746573ULL ^ k1;
    }

    static uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

    void round() {
        v0 += v1; v1 = rotl(v1, 13); v1 ^= v0; v0 = rotl(v0, 32);
        v2 += v3; v3 = rotl(v3, 16); v3 ^= v2;
        v0 += v3; v3 = rotl(v3, 21); v3 ^= v0;
        v2 += v1; v1 = rotl(v1, 17); v1 ^= v2; v2 = rotl(v2, 32);
    }

    uint64_t digest(const uint8_t* data, size_t len) {
        size_t full = len / 8;
        for (size_t i = 0; i < full; ++i) {
            uint64_t m;
            std::memcpy(&m, data + i * 8, 8);
            v3 ^= m;
            round(); round();
            v0 ^= m;
        }
        uint64_t last = static_cast<uint64_t>(len & 0xff) << 56;
        for (size_t i = 0; i < (len & 7); ++i)
            last |= static_cast<uint64_t>(data[full * 8 + i]) << (8 * i);
        v3 ^= last;
        round(); round();
        v0 ^= last;
        v2 ^= 0xff;
        round(); round(); round(); round();
        return v0 ^ v1 ^ v2 ^ v3;
    }
};

uint64_t siphash24(uint64_t k0, uint64_t k1, const uint8_t* data, size_t len) {
    SipHash h(k0, k1);
    return h.digest(data, len);
}

}  // namespace

Token make_trapdoor(const SecretKey& key, std::span<const std::string> keywords) {
    std::vector<std::string> canon(keywords.begin(), keywords.end());
    std::sort(canon.begin(), canon.end());
    std::string buf;
    for (const std::string& kw : canon) {
        uint32_t len = static_cast<uint32_t>(kw.size());
        buf.append(reinterpret_cast<const char*>(&len), sizeof(len));
        buf.append(kw);
    }
    const uint8_t* p = reinterpret_cast<const uint8_t*>(buf.data());
    uint64_t lo = siphash24(key.k0, key.k1, p, buf.size());
    uint64_t hi = siphash24(key.k0 ^ 0x5cb1f0d3e2a94687ULL, key.k1 ^ 0x9e3779b97f4a7c15ULL, p,
                            buf.size());
    Token t;
    std::memcpy(t.data(), &lo, 8);
    std::memcpy(t.data() + 8, &hi, 8);
    return t;
}

std::unordered_map<Token, uint32_t, TokenHash> ObservationLog::token_positions() const {
    std::unordered_map<Token, uint32_t, TokenHash> pos;
    pos.reserve(observations.size());
    for (uint32_t i = 0; i < observations.size(); ++i) {
        auto [it, inserted] = pos.emplace(observations[i].token, i);
        if (!inserted) throw error("observation log contains a duplicate trapdoor");
    }
    return pos;
}

const GroundTruth::Entry& GroundTruth::at(const Token& t) const {
    auto it = entries.find(t);
    if (it == entries.end()) throw error("ground truth missing an observed trapdoor");
    return it->second;
}

SchemeInstance::SchemeInstance(const Corpus& real_corpus, Vocabulary vocab, uint32_t d,
                               SecretKey key)
    : set_(std::move(vocab), d), key_(key), postings_(real_corpus, set_.vocab()) {
    doc_ids_.reserve(real_corpus.size());
    for (const Document& doc : real_corpus.docs) doc_ids_.push_back(doc.doc_id);

    // Token map covers exactly the conjunctions with non-empty result sets;
    // searching any other valid trapdoor naturally yields the empty set.
    const size_t words = postings_.words();
    std::vector<uint64_t> merged(words);
    for (uint64_t rank = 0; rank < set_.m(); ++rank) {
        Conjunction c = set_.unrank(rank);
        std::copy_n(postings_.column(c[0]), words, merged.data());
        for (uint32_t j = 1; j < d; ++j) {
            const uint64_t* col = postings_.column(c[j]);
            for (size_t w = 0; w < words; ++w) merged[w] &= col[w];
        }
        bool any = false;
        for (size_t w = 0; w < words && !any; ++w) any = merged[w] != 0;
        if (any) {
            auto [it, inserted] = token_to_rank_.emplace(trapdoor_for_rank(rank), rank);
            if (!inserted) throw error("trapdoor collision across distinct conjunctions");
        }
    }
}

SchemeInstance build_index(const Corpus& real_corpus, const Vocabulary& vocab, uint32_t d,
                           SecretKey key) {
    return SchemeInstance(real_corpus, vocab, d, key);
}

Token SchemeInstance::trapdoor_for_rank(uint64_t rank) const {
    std::vector<std::string> kws = set_.keywords(rank);
    return make_trapdoor(key_, kws);
}

std::vector<int32_t> SchemeInstance::result_for_rank(uint64_t rank) const {
    Conjunction c = set_.unrank(rank);
    const size_t words = postings_.words();
    std::vector<uint64_t> merged(words);
    std::copy_n(postings_.column(c[0]), words, merged.data());
    for (uint32_t j = 1; j < set_.d(); ++j) {
        const uint64_t* col = postings_.column(c[j]);
        for (size_t w = 0; w < words; ++w) merged[w] &= col[w];
    }
    std::vector<int32_t> ids;
    for (size_t w = 0; w < words; ++w) {
        uint64_t bits = merged[w];
        while (bits) {
            unsigned b = static_cast<unsigned>(std::countr_zero(bits));
            ids.push_back(doc_ids_[w * 64 + b]);
            bits &= bits - 1;
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<int32_t> SchemeInstance::search(const Token& td) const {
    auto it = token_to_rank_.find(td);
    if (it == token_to_rank_.end()) return {};
    return result_for_rank(it->second);
}

std::pair<ObservationLog, GroundTruth> sample_queries(const SchemeInstance& instance,
                                                      double fraction, uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw error("sample_queries: fraction must be in (0,1]");
    const uint64_t m = instance.conjunctions().m();
    uint64_t count = static_cast<uint64_t>(std::llround(fraction * static_cast<double>(m)));
    if (count == 0) throw error("sample_queries: fraction yields zero queries");

    rng_t rng(seed);
    std::vector<uint64_t> ranks = sample_without_replacement(m, count, rng);

    ObservationLog log;
    log.observations.resize(count);
    GroundTruth truth;
    truth.entries.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        uint64_t rank = ranks[i];
        Token td = instance.trapdoor_for_rank(rank);
        log.observations[i] = Observation{td, instance.result_for_rank(rank)};
        GroundTruth::Entry entry;
        entry.real_rank = rank;
        entry.keywords = instance.conjunctions().keywords(rank);
        auto [it, inserted] = truth.entries.emplace(td, std::move(entry));
        if (!inserted) throw error("trapdoor collision across distinct conjunctions");
    }
    return {std::move(log), std::move(truth)};
}

std::vector<KnownQueryPair> sample_known_queries(const ObservationLog& log,
                                                 const ConjunctionSet& attacker_set,
                                                 const GroundTruth& truth, size_t k,
                                                 uint64_t seed) {
    // Eligible: observed trapdoors whose true conjunction can be expressed in
    // the attacker's vocabulary.
    std::vector<KnownQueryPair> eligible;
    for (const Observation& obs : log.observations) {
        const GroundTruth::Entry& entry = truth.at(obs.token);
        Conjunction idx;
        idx.reserve(entry.keywords.size());
        bool ok = true;
        for (const std::string& kw : entry.keywords) {
            auto i = attacker_set.vocab().index_of(kw);
            if (!i) {
                ok = false;
                break;
            }
            idx.push_back(*i);
        }
        if (!ok) continue;
        std::sort(idx.begin(), idx.end());
        eligible.push_back(KnownQueryPair{attacker_set.rank(idx), obs.token});
    }
    if (k > eligible.size())
        throw error("sample_known_queries: requested k=" + std::to_string(k) +
                    " but only " + std::to_string(eligible.size()) + " observations are eligible");
    rng_t rng(seed);
    std::vector<uint64_t> pick = sample_without_replacement(eligible.size(), k, rng);
    std::vector<KnownQueryPair> out;
    out.reserve(k);
    for (uint64_t i : pick) out.push_back(eligible[i]);
    return out;
}

void save_observations(const ObservationLog& log, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw error("cannot write observations: " + path.string());
    for (const Observation& obs : log.observations) {
        f << to_hex(obs.token.data(), obs.token.size());
        for (int32_t id : obs.ids) f << ' ' << id;
        f << '\n';
    }
}

ObservationLog load_observations(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw error("cannot read observations: " + path.string());
    ObservationLog log;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string hex;
        ss >> hex;
        std::vector<uint8_t> raw = from_hex(hex);
        if (raw.size() != std::tuple_size<Token>::value)
            throw error("observation file: bad token length");
        Observation obs;
        std::copy(raw.begin(), raw.end(), obs.token.begin());
        int32_t id;
        while (ss >> id) obs.ids.push_back(id);
        log.observations.push_back(std::move(obs));
    }
    return log;
}

void save_known_queries(std::span<const KnownQueryPair> known, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw error("cannot write known queries: " + path.string());
    for (const KnownQueryPair& kq : known)
        f << kq.attacker_rank << ' ' << to_hex(kq.token.data(), kq.token.size()) << '\n';
}

std::vector<KnownQueryPair> load_known_queries(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw error("cannot read known queries: " + path.string());
    std::vector<KnownQueryPair> out;
    uint64_t rank;
    std::string hex;
    while (f >> rank >> hex) {
        std::vector<uint8_t> raw = from_hex(hex);
        if (raw.size() != std::tuple_size<Token>::value)
            throw error("known-query file: bad token length");
        KnownQueryPair kq;
        kq.attacker_rank = rank;
        std::copy(raw.begin(), raw.end(), kq.token.begin());
        out.push_back(kq);
    }
    return out;
}

}  // namespace ckws
