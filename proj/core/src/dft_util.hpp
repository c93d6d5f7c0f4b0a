#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "rsl/errors.hpp"
#include "rsl/lattice.hpp"

namespace rsl::detail {

// FFTW plan creation is not thread safe; execution is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

inline void dft_inplace(const std::vector<int>& dims, std::complex<double>* data,
                        int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                             reinterpret_cast<fftw_complex*>(data),
                             reinterpret_cast<fftw_complex*>(data), sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
}

inline Index next_pow2(Index n) {
    Index p = 1;
    while (p < n) {
        if (p > (Index(1) << 61))
            throw MemoryBudgetError("padded transform size overflows");
        p <<= 1;
    }
    return p;
}

}  // namespace rsl::detail
