#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmv {

// Error with a stable machine-readable code ("BadMagic", "Truncated", ...).
class DmvError : public std::runtime_error {
public:
    DmvError(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class AccessKind : uint8_t { Read = 0, Write = 1 };

// One memory reference. instr_gap counts instructions retired since the
// previous record, including this memory instruction, so the per-trace sum
// of instr_gap is the total instruction count.
struct TraceRecord {
    uint64_t addr = 0;
    AccessKind kind = AccessKind::Read;
    uint16_t func_id = 0;
    uint16_t bb_id = 0;
    uint16_t alu_ops = 0;
    uint32_t instr_gap = 1;

    bool operator==(const TraceRecord&) const = default;
};

struct TraceHeader {
    uint8_t word_size_bytes = 8;  // 4 or 8
    uint64_t record_count = 0;
    std::string source_label;  // provenance only, not serialized
};

struct Trace {
    TraceHeader header;
    std::vector<TraceRecord> records;

    size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

// Semantic equality: header fields that survive a DMV1 round-trip plus all
// records. source_label is in-memory provenance and deliberately excluded.
bool same_trace(const Trace& a, const Trace& b);

// ---- DMV1 binary format ----------------------------------------------------
// Little-endian. Header (16 bytes): magic "DMV1", version u8 = 1,
// word_size u8, reserved u16 = 0, record_count u64. Record (20 bytes):
// addr u64, flags u8 (bit0 = write), pad u8 = 0, func_id u16, bb_id u16,
// alu_ops u16, instr_gap u32.

constexpr size_t kDmv1HeaderBytes = 16;
constexpr size_t kDmv1RecordBytes = 20;

Trace read_trace(std::istream& in);
void write_trace(const Trace& trace, std::ostream& out);
Trace read_trace_file(const std::string& path);
void write_trace_file(const Trace& trace, const std::string& path);

// ---- text format -----------------------------------------------------------
// One record per line: "R|W <hex addr> <func_id> <bb_id> <alu_ops> <instr_gap>",
// '#' starts a comment.
Trace read_trace_text(std::istream& in, uint8_t word_size_bytes = 8);
void write_trace_text(const Trace& trace, std::ostream& out);

// ---- generators ------------------------------------------------------------
// All generators are deterministic functions of their parameters and seed.

Trace gen_sequential(uint64_t n, uint64_t start, uint64_t stride_words,
                     uint8_t word_size = 8);
Trace gen_random(uint64_t n, uint64_t footprint_bytes, uint8_t word_size,
                 uint64_t seed);
Trace gen_single_address(uint64_t n, uint64_t addr = 0, uint8_t word_size = 8);
Trace gen_cyclic(uint64_t footprint_bytes, uint64_t n, uint8_t word_size = 8,
                 uint64_t start = 0);
Trace gen_pointer_chase(uint64_t footprint_bytes, uint64_t n,
                        uint8_t word_size, uint64_t seed);

// Deals blocks of `granularity` consecutive records round-robin onto c
// output traces. The concatenation of shards in deal order reproduces the
// input; the final partial block goes to the next core in deal order.
std::vector<Trace> shard_trace(const Trace& trace, uint32_t cores,
                               uint64_t granularity);

}  // namespace dmv
