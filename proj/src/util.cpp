#include "ckws/util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <mutex>

namespace ckws {

std::vector<uint64_t> sample_without_replacement(uint64_t n, uint64_t k, rng_t& rng) {
    if (k > n) throw error("sample_without_replacement: k > n");
    // Partial Fisher-Yates over an explicit index array. n is at most the
    // conjunction count of a desk-scale vocabulary, so the array is cheap.
    std::vector<uint64_t> idx(n);
    for (uint64_t i = 0; i < n; ++i) idx[i] = i;
    std::vector<uint64_t> out;
    out.reserve(k);
    for (uint64_t i = 0; i < k; ++i) {
        uint64_t j = i + uniform_below(rng, n - i);
        std::swap(idx[i], idx[j]);
        out.push_back(idx[i]);
    }
    return out;
}

size_t resolve_workers(size_t workers) {
    if (workers != 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(size_t total, size_t workers, const std::function<void(size_t, size_t)>& fn) {
    if (total == 0) return;
    size_t w = std::min(resolve_workers(workers), total);
    if (w <= 1) {
        fn(0, total);
        return;
    }
    size_t chunk = (total + w - 1) / w;
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (size_t t = 0; t < w; ++t) {
        size_t begin = t * chunk;
        size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string to_hex(const uint8_t* data, size_t len) {
    static const char digits[] = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (size_t i = 0; i < len; ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0xf];
    }
    return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw error("from_hex: odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw error("from_hex: bad digit");
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

std::string format_double(double x) {
    char buf[64];
    // %.17g always round-trips; try shorter forms first for readable files.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back = 0;
        std::sscanf(buf, "%lf", &back);
        if (back == x || (x != x && back != back)) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string human_bytes(uint64_t bytes) {
    char buf[64];
    double gib = static_cast<double>(bytes) / (1024.0 * 1024.0 * 1024.0);
    if (gib >= 0.1) {
        std::snprintf(buf, sizeof(buf), "%.1f GiB", gib);
        return buf;
    }
    double mib = static_cast<double>(bytes) / (1024.0 * 1024.0);
    if (mib >= 0.1) {
        std::snprintf(buf, sizeof(buf), "%.1f MiB", mib);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%llu B", static_cast<unsigned long long>(bytes));
    return buf;
}

}  // namespace ckws
