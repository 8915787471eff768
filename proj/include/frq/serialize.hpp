#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitvec.hpp"
#include "common.hpp"
#include "listing.hpp"
#include "majority.hpp"
#include "minority.hpp"
#include "predcount.hpp"
#include "rmq.hpp"
#include "sequence.hpp"

namespace frq {

class byte_writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32le(u32 v) {
        for (int k = 0; k < 4; ++k) buf_.push_back(std::uint8_t(v >> (8 * k)));
    }

    void u64le(u64 v) {
        for (int k = 0; k < 8; ++k) buf_.push_back(std::uint8_t(v >> (8 * k)));
    }

    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    void tag(const char (&t)[5]) { bytes(t, 4); }

    std::size_t size() const { return buf_.size(); }
    const std::vector<std::uint8_t>& data() const { return buf_; }
    std::vector<std::uint8_t> take() && { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class byte_reader {
public:
    byte_reader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

    std::uint8_t u8() {
        want(1);
        return p_[off_++];
    }

    u32 u32le() {
        want(4);
        u32 v = 0;
        for (int k = 0; k < 4; ++k) v |= u32(p_[off_ + k]) << (8 * k);
        off_ += 4;
        return v;
    }

    u64 u64le() {
        want(8);
        u64 v = 0;
        for (int k = 0; k < 8; ++k) v |= u64(p_[off_ + k]) << (8 * k);
        off_ += 8;
        return v;
    }

    void bytes(void* out, std::size_t n) {
        want(n);
        std::memcpy(out, p_ + off_, n);
        off_ += n;
    }

    std::array<char, 4> tag() {
        std::array<char, 4> t;
        bytes(t.data(), 4);
        return t;
    }

    std::size_t offset() const { return off_; }
    std::size_t remaining() const { return n_ - off_; }

private:
    const std::uint8_t* p_;
    std::size_t n_, off_ = 0;

    void want(std::size_t n) const {
        if (n > n_ - off_)
            throw std::runtime_error("index file truncated");
    }
};

namespace detail {

constexpr std::array<u32, 256> make_crc_table() {
    std::array<u32, 256> t{};
    for (u32 i = 0; i < 256; ++i) {
        u32 c = i;
        for (int k = 0; k < 8; ++k)
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        t[i] = c;
    }
    return t;
}

inline constexpr auto crc_table = make_crc_table();

} // namespace detail

inline u32 crc32(const std::uint8_t* p, std::size_t n) {
    u32 c = 0xFFFFFFFFu;
    for (std::size_t k = 0; k < n; ++k)
        c = detail::crc_table[(c ^ p[k]) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

inline void write_bitvec(byte_writer& w, const bitvec& b) {
    w.u64le(b.size());
    w.u64le(b.raw_words().size());
    for (u64 word : b.raw_words()) w.u64le(word);
}

inline bitvec read_bitvec(byte_reader& r) {
    u64 nbits = r.u64le();
    u64 nwords = r.u64le();
    if (nwords != (nbits + 63) / 64 || nwords > r.remaining() / 8)
        throw std::runtime_error("index file: bad bit vector");
    std::vector<u64> words(nwords);
    for (u64& word : words) word = r.u64le();
    return bitvec(nbits, std::move(words));
}

inline void write_sequence(byte_writer& w, const sequence& s) {
    w.u64le(s.size());
    w.u64le(s.sigma());
    w.u64le(s.levels().size());
    for (const bitvec& lv : s.levels()) write_bitvec(w, lv);
}

inline sequence read_sequence(byte_reader& r) {
    u64 n = r.u64le();
    u64 sigma = r.u64le();
    u64 nlevels = r.u64le();
    if (nlevels > 64) throw std::runtime_error("index file: bad sequence");
    std::vector<bitvec> levels;
    levels.reserve(nlevels);
    for (u64 l = 0; l < nlevels; ++l) levels.push_back(read_bitvec(r));
    return sequence(n, sigma, std::move(levels));
}

// Which structures to materialise over a sequence and their parameters.
struct build_options {
    bool with_fixed = false;
    tau fixed_tau{1, 2};
    bool with_var = true;
    bool with_block = false;
    u64 slack = 4;
    bool with_minority = true;
    u64 minority_block = 0; // 0: exact listing; else sparse block length
    bool with_counts = false;
    u64 counts_min = 1;
};

// A sequence plus the selected query structures, all referencing the
// pinned sequence object.
struct index_file {
    std::unique_ptr<sequence> seq;
    std::unique_ptr<fixed_majority_index> fixed;
    std::unique_ptr<variable_majority_index> var;
    std::unique_ptr<block_majority_index> block;
    std::unique_ptr<rmq_index<u32>> minority_links;
    std::unique_ptr<sparse_rmq_index> minority_blocks;
    u64 minority_block = 0;
    std::unique_ptr<symbol_counts> counts;
    std::optional<u64> counts_min;
};

inline index_file build_index_file(const std::vector<symbol_t>& data,
                                   u64 sigma, const build_options& opt) {
    index_file f;
    f.seq = std::make_unique<sequence>(data, sigma);
    if (opt.with_fixed)
        f.fixed = std::make_unique<fixed_majority_index>(*f.seq, data,
                                                         opt.fixed_tau);
    if (opt.with_var)
        f.var = std::make_unique<variable_majority_index>(*f.seq, data);
    if (opt.with_block)
        f.block =
            std::make_unique<block_majority_index>(*f.seq, data, opt.slack);
    if (opt.with_minority) {
        auto links = prev_occ_array(data, sigma);
        f.minority_block = opt.minority_block;
        if (opt.minority_block > 0)
            f.minority_blocks = std::make_unique<sparse_rmq_index>(
                links, opt.minority_block);
        else
            f.minority_links =
                std::make_unique<rmq_index<u32>>(std::move(links));
    }
    if (opt.with_counts) {
        f.counts = std::make_unique<symbol_counts>(*f.seq, data,
                                                   opt.counts_min);
        f.counts_min = opt.counts_min;
    }
    return f;
}

namespace detail {

struct section {
    std::array<char, 4> tag;
    byte_writer payload;
};

inline void add_section(std::vector<section>& out, const char (&tag)[5],
                        byte_writer payload) {
    section s;
    std::memcpy(s.tag.data(), tag, 4);
    s.payload = std::move(payload);
    out.push_back(std::move(s));
}

} // namespace detail

inline constexpr char INDEX_MAGIC[5] = "FRQX";
inline constexpr u32 INDEX_VERSION = 1;

inline std::vector<std::uint8_t> serialize_index_file(const index_file& f) {
    if (!f.seq) throw std::invalid_argument("serialize_index_file: no sequence");
    std::vector<detail::section> sections;

    {
        byte_writer w;
        w.u64le(f.seq->size());
        w.u64le(f.seq->sigma());
        detail::add_section(sections, "SSTA", std::move(w));
    }
    {
        byte_writer w;
        write_sequence(w, *f.seq);
        detail::add_section(sections, "SEQ1", std::move(w));
    }
    if (f.fixed) {
        byte_writer w;
        w.u64le(f.fixed->threshold().num);
        w.u64le(f.fixed->threshold().den);
        w.u64le(f.fixed->levels());
        for (u64 b = 0; b < f.fixed->levels(); ++b)
            write_bitvec(w, f.fixed->flags(b));
        detail::add_section(sections, "FMAJ", std::move(w));
    }
    if (f.var) {
        byte_writer w;
        w.u64le(f.var->levels());
        for (u64 b = 0; b < f.var->levels(); ++b)
            write_sequence(w, f.var->band_seq(b));
        detail::add_section(sections, "VMAJ", std::move(w));
    }
    if (f.block) {
        byte_writer w;
        w.u64le(f.block->slack());
        w.u64le(f.block->band_limit());
        for (u64 t = 0; t <= f.block->band_limit(); ++t) {
            w.u64le(f.block->row_count(t));
            for (u64 r = 0; r < f.block->row_count(t); ++r)
                write_bitvec(w, f.block->flags(t, f.block->bmin(t) + r));
        }
        detail::add_section(sections, "BMAJ", std::move(w));
    }
    if (f.minority_links || f.minority_blocks) {
        byte_writer w;
        w.u64le(f.minority_block);
        detail::add_section(sections, "MINR", std::move(w));
    }
    if (f.counts) {
        byte_writer w;
        w.u64le(f.counts_min.value_or(f.counts->min_count()));
        detail::add_section(sections, "CNTS", std::move(w));
    }

    byte_writer out;
    out.tag(INDEX_MAGIC);
    out.u32le(INDEX_VERSION);
    out.u32le(u32(sections.size()));
    u64 off = out.size() + sections.size() * 24;
    for (const auto& s : sections) {
        out.bytes(s.tag.data(), 4);
        out.u64le(off);
        out.u64le(s.payload.size());
        out.u32le(crc32(s.payload.data().data(), s.payload.size()));
        off += s.payload.size();
    }
    for (const auto& s : sections)
        out.bytes(s.payload.data().data(), s.payload.size());
    return std::move(out).take();
}

inline index_file parse_index_file(const std::uint8_t* data, std::size_t n) {
    byte_reader head(data, n);
    auto magic = head.tag();
    if (std::memcmp(magic.data(), INDEX_MAGIC, 4) != 0)
        throw std::runtime_error("index file: bad magic");
    u32 version = head.u32le();
    if (version != INDEX_VERSION)
        throw std::runtime_error("index file: unsupported version " +
                                 std::to_string(version));
    u32 nsections = head.u32le();

    struct entry {
        std::array<char, 4> tag;
        u64 off, len;
        u32 crc;
    };
    std::vector<entry> entries;
    for (u32 s = 0; s < nsections; ++s) {
        entry e;
        e.tag = head.tag();
        e.off = head.u64le();
        e.len = head.u64le();
        e.crc = head.u32le();
        if (e.off > n || e.len > n - e.off)
            throw std::runtime_error("index file: section out of bounds");
        if (crc32(data + e.off, e.len) != e.crc)
            throw std::runtime_error("index file: checksum mismatch");
        for (const auto& prev : entries)
            if (prev.tag == e.tag)
                throw std::runtime_error("index file: duplicate section");
        entries.push_back(e);
    }

    auto find = [&](const char (&t)[5]) -> const entry* {
        for (const auto& e : entries)
            if (std::memcmp(e.tag.data(), t, 4) == 0) return &e;
        return nullptr;
    };

    const entry* seq_e = find("SEQ1");
    if (!seq_e) throw std::runtime_error("index file: missing sequence");

    index_file f;
    {
        byte_reader r(data + seq_e->off, seq_e->len);
        f.seq = std::make_unique<sequence>(read_sequence(r));
    }
    if (const entry* e = find("SSTA")) {
        byte_reader r(data + e->off, e->len);
        if (r.u64le() != f.seq->size() || r.u64le() != f.seq->sigma())
            throw std::runtime_error("index file: header mismatch");
    }
    if (const entry* e = find("FMAJ")) {
        byte_reader r(data + e->off, e->len);
        u64 num = r.u64le(), den = r.u64le();
        u64 nlevels = r.u64le();
        std::vector<bitvec> levels;
        levels.reserve(nlevels);
        for (u64 b = 0; b < nlevels; ++b) levels.push_back(read_bitvec(r));
        f.fixed = std::make_unique<fixed_majority_index>(
            *f.seq, tau(num, den), std::move(levels));
    }
    if (const entry* e = find("VMAJ")) {
        byte_reader r(data + e->off, e->len);
        u64 nlevels = r.u64le();
        std::vector<sequence> levels;
        levels.reserve(nlevels);
        for (u64 b = 0; b < nlevels; ++b) levels.push_back(read_sequence(r));
        f.var = std::make_unique<variable_majority_index>(*f.seq,
                                                          std::move(levels));
    }
    if (const entry* e = find("BMAJ")) {
        byte_reader r(data + e->off, e->len);
        u64 slack = r.u64le();
        u64 tmax = r.u64le();
        if (tmax != ceil_log2(f.seq->sigma()))
            throw std::runtime_error("index file: band limit mismatch");
        std::vector<std::vector<bitvec>> rows(tmax + 1);
        for (u64 t = 0; t <= tmax; ++t) {
            u64 cnt = r.u64le();
            rows[t].reserve(cnt);
            for (u64 q = 0; q < cnt; ++q) rows[t].push_back(read_bitvec(r));
        }
        f.block = std::make_unique<block_majority_index>(*f.seq, slack,
                                                         std::move(rows));
    }
    if (const entry* e = find("MINR")) {
        byte_reader r(data + e->off, e->len);
        f.minority_block = r.u64le();
        auto links = prev_occ_array(f.seq->decode(), f.seq->sigma());
        if (f.minority_block > 0)
            f.minority_blocks = std::make_unique<sparse_rmq_index>(
                links, f.minority_block);
        else
            f.minority_links =
                std::make_unique<rmq_index<u32>>(std::move(links));
    }
    if (const entry* e = find("CNTS")) {
        byte_reader r(data + e->off, e->len);
        u64 min_count = r.u64le();
        f.counts = std::make_unique<symbol_counts>(*f.seq, f.seq->decode(),
                                                   min_count);
        f.counts_min = min_count;
    }
    return f;
}

inline index_file parse_index_file(const std::vector<std::uint8_t>& buf) {
    return parse_index_file(buf.data(), buf.size());
}

} // namespace frq
