#pragma once

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace parawave::fft {

using cplx = std::complex<double>;

// Thin deterministic wrapper around FFTW complex-to-complex transforms.
// Plans are created with FFTW_ESTIMATE (no runtime measurement, so repeated
// runs produce bit-identical output) and cached per thread.  The FFTW planner
// itself is not thread-safe, so plan creation is serialized.

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanSlot {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t len = 0;

    PlanSlot() = default;
    PlanSlot(const PlanSlot&) = delete;
    PlanSlot& operator=(const PlanSlot&) = delete;
    PlanSlot(PlanSlot&& o) noexcept : plan(o.plan), buf(o.buf), len(o.len) {
        o.plan = nullptr;
        o.buf = nullptr;
    }
    ~PlanSlot() {
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

struct PlanKey {
    int rank;
    int n;
    int sign;
    bool operator<(const PlanKey& o) const {
        return std::tie(rank, n, sign) < std::tie(o.rank, o.n, o.sign);
    }
};

inline PlanSlot& get_plan(int rank, int n, int sign) {
    thread_local std::map<PlanKey, PlanSlot> cache;
    auto it = cache.find({rank, n, sign});
    if (it != cache.end()) return it->second;

    PlanSlot slot;
    slot.len = (rank == 1) ? std::size_t(n) : std::size_t(n) * n;
    slot.buf = fftw_alloc_complex(slot.len);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (rank == 1)
            slot.plan = fftw_plan_dft_1d(n, slot.buf, slot.buf, sign, FFTW_ESTIMATE);
        else
            slot.plan = fftw_plan_dft_2d(n, n, slot.buf, slot.buf, sign, FFTW_ESTIMATE);
    }
    if (!slot.plan) throw std::runtime_error("fft: plan creation failed");
    auto [pos, ok] = cache.emplace(PlanKey{rank, n, sign}, std::move(slot));
    return pos->second;
}

inline void execute(int rank, int n, int sign, cplx* data, std::size_t len) {
    PlanSlot& slot = get_plan(rank, n, sign);
    if (len != slot.len) throw std::invalid_argument("fft: size mismatch");
    std::memcpy(slot.buf, data, len * sizeof(cplx));
    fftw_execute(slot.plan);
    std::memcpy(data, slot.buf, len * sizeof(cplx));
}

}  // namespace detail

// Forward transform, normalized so that coefficients are mode amplitudes:
//   spec[k] = (1/M) sum_x vals[x] e^{-i k.x},  M = n^rank.
inline void forward(int rank, int n, std::vector<cplx>& data) {
    detail::execute(rank, n, FFTW_FORWARD, data.data(), data.size());
    const double inv = 1.0 / double(data.size());
    for (auto& c : data) c *= inv;
}

// Inverse transform: vals[x] = sum_k spec[k] e^{+i k.x}.
inline void inverse(int rank, int n, std::vector<cplx>& data) {
    detail::execute(rank, n, FFTW_BACKWARD, data.data(), data.size());
}

}  // namespace parawave::fft
