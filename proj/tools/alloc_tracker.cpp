#include "alloc_tracker.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <new>

#include <gmp.h>
#include <malloc.h>

namespace modforms::alloc_tracker {
namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

void note_alloc(std::size_t n) {
    std::size_t now = g_current.fetch_add(n, std::memory_order_relaxed) + n;
    std::size_t peak = g_peak.load(std::memory_order_relaxed);
    while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
}

void note_free(std::size_t n) { g_current.fetch_sub(n, std::memory_order_relaxed); }

void* tracked_malloc(std::size_t n) {
    void* p = std::malloc(n);
    if (p) note_alloc(malloc_usable_size(p));
    return p;
}

void tracked_free(void* p) {
    if (!p) return;
    note_free(malloc_usable_size(p));
    std::free(p);
}

void* gmp_alloc(std::size_t n) {
    void* p = tracked_malloc(n);
    if (!p) std::abort();
    return p;
}

void* gmp_realloc(void* old, std::size_t, std::size_t n) {
    std::size_t before = old ? malloc_usable_size(old) : 0;
    void* p = std::realloc(old, n);
    if (!p) std::abort();
    note_free(before);
    note_alloc(malloc_usable_size(p));
    return p;
}

void gmp_free(void* p, std::size_t) { tracked_free(p); }

}  // namespace

void install_gmp_hooks() { mp_set_memory_functions(gmp_alloc, gmp_realloc, gmp_free); }
void reset_peak() { g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed); }
std::size_t peak_bytes() { return g_peak.load(std::memory_order_relaxed); }
std::size_t current_bytes() { return g_current.load(std::memory_order_relaxed); }

}  // namespace modforms::alloc_tracker

void* operator new(std::size_t n) {
    if (void* p = modforms::alloc_tracker::tracked_malloc(n ? n : 1)) return p;
    throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void operator delete(void* p) noexcept { modforms::alloc_tracker::tracked_free(p); }
void operator delete[](void* p) noexcept { modforms::alloc_tracker::tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { modforms::alloc_tracker::tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { modforms::alloc_tracker::tracked_free(p); }
