#include "dmv/trace.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace dmv {

namespace {

constexpr std::array<uint8_t, 4> kMagic = {0x44, 0x4D, 0x56, 0x31};  // "DMV1"
constexpr uint8_t kVersion = 1;

void put_u16(std::string& buf, uint16_t v) {
    buf.push_back(char(v & 0xff));
    buf.push_back(char((v >> 8) & 0xff));
}

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

uint16_t get_u16(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

uint32_t get_u32(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

// Seeded engine; raw 64-bit outputs are reduced explicitly so results do not
// depend on the standard library's distribution implementations.
uint64_t rand_below(std::mt19937_64& eng, uint64_t n) {
    // Lemire-style rejection to avoid modulo bias.
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

}  // namespace

bool same_trace(const Trace& a, const Trace& b) {
    return a.header.word_size_bytes == b.header.word_size_bytes &&
           a.header.record_count == b.header.record_count &&
           a.records == b.records;
}

Trace read_trace(std::istream& in) {
    std::array<uint8_t, kDmv1HeaderBytes> hdr{};
    in.read(reinterpret_cast<char*>(hdr.data()), hdr.size());
    if (in.gcount() != std::streamsize(hdr.size()))
        throw DmvError("Truncated", "stream shorter than DMV1 header");
    if (!std::equal(kMagic.begin(), kMagic.end(), hdr.begin()))
        throw DmvError("BadMagic", "not a DMV1 stream");
    if (hdr[4] != kVersion)
        throw DmvError("UnsupportedVersion",
                       "DMV1 version " + std::to_string(hdr[4]) + " unsupported");
    uint8_t word_size = hdr[5];
    if (word_size != 4 && word_size != 8)
        throw DmvError("BadWordSize",
                       "word_size_bytes must be 4 or 8, got " + std::to_string(word_size));
    uint64_t count = get_u64(hdr.data() + 8);

    Trace t;
    t.header.word_size_bytes = word_size;
    t.header.record_count = count;
    t.records.reserve(count);
    std::array<uint8_t, kDmv1RecordBytes> rec{};
    for (uint64_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(rec.data()), rec.size());
        if (in.gcount() != std::streamsize(rec.size()))
            throw DmvError("Truncated", "record " + std::to_string(i) +
                                            " of " + std::to_string(count) + " incomplete");
        TraceRecord r;
        r.addr = get_u64(rec.data());
        r.kind = (rec[8] & 0x1) ? AccessKind::Write : AccessKind::Read;
        r.func_id = get_u16(rec.data() + 10);
        r.bb_id = get_u16(rec.data() + 12);
        r.alu_ops = get_u16(rec.data() + 14);
        r.instr_gap = get_u32(rec.data() + 16);
        t.records.push_back(r);
    }
    return t;
}

void write_trace(const Trace& trace, std::ostream& out) {
    std::string buf;
    buf.reserve(kDmv1HeaderBytes + trace.records.size() * kDmv1RecordBytes);
    buf.append(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
    buf.push_back(char(kVersion));
    buf.push_back(char(trace.header.word_size_bytes));
    put_u16(buf, 0);
    put_u64(buf, trace.records.size());
    for (const TraceRecord& r : trace.records) {
        put_u64(buf, r.addr);
        buf.push_back(r.kind == AccessKind::Write ? char(1) : char(0));
        buf.push_back(char(0));
        put_u16(buf, r.func_id);
        put_u16(buf, r.bb_id);
        put_u16(buf, r.alu_ops);
        put_u32(buf, r.instr_gap);
    }
    out.write(buf.data(), std::streamsize(buf.size()));
    if (!out) throw DmvError("IoFailure", "write failed");
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DmvError("IoFailure", "cannot open " + path);
    Trace t = read_trace(in);
    t.header.source_label = path;
    return t;
}

void write_trace_file(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DmvError("IoFailure", "cannot open " + path);
    write_trace(trace, out);
}

Trace read_trace_text(std::istream& in, uint8_t word_size_bytes) {
    if (word_size_bytes != 4 && word_size_bytes != 8)
        throw DmvError("BadWordSize", "word_size_bytes must be 4 or 8");
    Trace t;
    t.header.word_size_bytes = word_size_bytes;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;  // blank line
        TraceRecord r;
        if (kind == "R")
            r.kind = AccessKind::Read;
        else if (kind == "W")
            r.kind = AccessKind::Write;
        else
            throw DmvError("ParseError",
                           "line " + std::to_string(lineno) + ": expected R or W");
        uint64_t func = 0, bb = 0, alu = 0, gap = 0;
        if (!(ls >> std::hex >> r.addr >> std::dec >> func >> bb >> alu >> gap))
            throw DmvError("ParseError",
                           "line " + std::to_string(lineno) + ": malformed record");
        if (gap < 1)
            throw DmvError("ParseError",
                           "line " + std::to_string(lineno) + ": instr_gap must be >= 1");
        r.func_id = uint16_t(func);
        r.bb_id = uint16_t(bb);
        r.alu_ops = uint16_t(alu);
        r.instr_gap = uint32_t(gap);
        t.records.push_back(r);
    }
    t.header.record_count = t.records.size();
    return t;
}

void write_trace_text(const Trace& trace, std::ostream& out) {
    out << "# word_size_bytes=" << int(trace.header.word_size_bytes)
        << " records=" << trace.records.size() << "\n";
    char buf[96];
    for (const TraceRecord& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%c %llx %u %u %u %u\n",
                      r.kind == AccessKind::Write ? 'W' : 'R',
                      static_cast<unsigned long long>(r.addr), unsigned(r.func_id),
                      unsigned(r.bb_id), unsigned(r.alu_ops), unsigned(r.instr_gap));
        out << buf;
    }
    if (!out) throw DmvError("IoFailure", "write failed");
}

Trace gen_sequential(uint64_t n, uint64_t start, uint64_t stride_words,
                     uint8_t word_size) {
    if (n < 1) throw DmvError("BadArgument", "n must be >= 1");
    if (stride_words < 1) throw DmvError("BadArgument", "stride_words must be >= 1");
    uint64_t step = stride_words * word_size;
    if (step != 0 && (n - 1) > (UINT64_MAX - start) / step)
        throw DmvError("Overflow", "addresses exceed 64-bit range");
    Trace t;
    t.header.word_size_bytes = word_size;
    t.records.reserve(n);
    for (uint64_t i = 0; i < n; ++i)
        t.records.push_back({start + i * step, AccessKind::Read, 0, 0, 0, 1});
    t.header.record_count = n;
    t.header.source_label = "gen:sequential";
    return t;
}

Trace gen_random(uint64_t n, uint64_t footprint_bytes, uint8_t word_size,
                 uint64_t seed) {
    constexpr uint64_t kDefaultW = 32;
    if (footprint_bytes < uint64_t(word_size) * kDefaultW)
        throw DmvError("BadArgument", "footprint smaller than one analysis window");
    uint64_t words = footprint_bytes / word_size;
    std::mt19937_64 eng(seed);
    Trace t;
    t.header.word_size_bytes = word_size;
    t.records.reserve(n);
    for (uint64_t i = 0; i < n; ++i)
        t.records.push_back(
            {rand_below(eng, words) * word_size, AccessKind::Read, 0, 0, 0, 1});
    t.header.record_count = n;
    t.header.source_label = "gen:random";
    return t;
}

Trace gen_single_address(uint64_t n, uint64_t addr, uint8_t word_size) {
    if (n < 1) throw DmvError("BadArgument", "n must be >= 1");
    Trace t;
    t.header.word_size_bytes = word_size;
    t.records.assign(n, {addr, AccessKind::Read, 0, 0, 0, 1});
    t.header.record_count = n;
    t.header.source_label = "gen:single";
    return t;
}

Trace gen_cyclic(uint64_t footprint_bytes, uint64_t n, uint8_t word_size,
                 uint64_t start) {
    if (footprint_bytes == 0 || footprint_bytes % word_size != 0)
        throw DmvError("BadArgument", "footprint must be a positive multiple of word_size");
    Trace t;
    t.header.word_size_bytes = word_size;
    t.records.reserve(n);
    uint64_t off = 0;
    for (uint64_t i = 0; i < n; ++i) {
        t.records.push_back({start + off, AccessKind::Read, 0, 0, 0, 1});
        off += word_size;
        if (off >= footprint_bytes) off = 0;
    }
    t.header.record_count = n;
    t.header.source_label = "gen:cyclic";
    return t;
}

Trace gen_pointer_chase(uint64_t footprint_bytes, uint64_t n, uint8_t word_size,
                        uint64_t seed) {
    uint64_t words = footprint_bytes / word_size;
    if (words < 2) throw DmvError("BadArgument", "footprint must hold at least 2 words");
    // Random single-cycle permutation (Sattolo), walked from word 0.
    std::vector<uint64_t> next(words);
    for (uint64_t i = 0; i < words; ++i) next[i] = i;
    std::mt19937_64 eng(seed);
    for (uint64_t i = words - 1; i > 0; --i) {
        uint64_t j = rand_below(eng, i);
        std::swap(next[i], next[j]);
    }
    Trace t;
    t.header.word_size_bytes = word_size;
    t.records.reserve(n);
    uint64_t cur = 0;
    for (uint64_t i = 0; i < n; ++i) {
        cur = next[cur];
        t.records.push_back({cur * word_size, AccessKind::Read, 0, 0, 0, 1});
    }
    t.header.record_count = n;
    t.header.source_label = "gen:chase";
    return t;
}

std::vector<Trace> shard_trace(const Trace& trace, uint32_t cores,
                               uint64_t granularity) {
    if (cores < 1) throw DmvError("BadArgument", "cores must be >= 1");
    if (granularity < 1) throw DmvError("BadArgument", "granularity must be >= 1");
    std::vector<Trace> shards(cores);
    for (auto& s : shards) {
        s.header.word_size_bytes = trace.header.word_size_bytes;
        s.header.source_label = trace.header.source_label;
    }
    uint64_t i = 0, core = 0;
    const uint64_t total = trace.records.size();
    while (i < total) {
        uint64_t take = std::min(granularity, total - i);
        auto& dst = shards[core].records;
        dst.insert(dst.end(), trace.records.begin() + i, trace.records.begin() + i + take);
        i += take;
        core = (core + 1) % cores;
    }
    for (auto& s : shards) s.header.record_count = s.records.size();
    return shards;
}

}  // namespace dmv
