#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "sig/errors.hpp"
#include "sig/kernels.hpp"

namespace sig::kern {

#if !(defined(__x86_64__) || defined(_M_X64))
const Kernels* avx2_table_or_null() { return nullptr; }
#endif

namespace {

std::atomic<const Kernels*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Kernels* select_initial() {
    const char* env = std::getenv("SIG_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        g_backend.store(Backend::Scalar);
        return &scalar_table();
    }
    const Kernels* avx2 = avx2_table_or_null();
    if (env != nullptr && std::strcmp(env, "avx2") == 0 && avx2 == nullptr) {
        // Explicit request for an unavailable backend: fall back but say so.
        std::fputs("sig: SIG_KERNELS=avx2 requested but AVX2 is unavailable; "
                   "using scalar kernels\n",
                   stderr);
    }
    if (avx2 != nullptr) {
        g_backend.store(Backend::Avx2);
        return avx2;
    }
    g_backend.store(Backend::Scalar);
    return &scalar_table();
}

} // namespace

const Kernels& active() {
    const Kernels* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = select_initial();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

Backend active_backend() {
    (void)active(); // force first-use selection so the reported backend is real
    return g_backend.load();
}

bool avx2_supported() { return avx2_table_or_null() != nullptr; }

void set_backend(Backend b) {
    if (b == Backend::Avx2) {
        const Kernels* avx2 = avx2_table_or_null();
        if (avx2 == nullptr) {
            throw Unsupported("set_backend: AVX2 kernels unavailable on this machine");
        }
        g_active.store(avx2, std::memory_order_release);
    } else {
        g_active.store(&scalar_table(), std::memory_order_release);
    }
    g_backend.store(b);
}

} // namespace sig::kern
