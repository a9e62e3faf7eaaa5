#ifndef LABELLENS_NODE_SET_HPP
#define LABELLENS_NODE_SET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace labellens {

using NodeId = int;

// Fixed-width set of node ids backed by 64-bit words.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe) : size_(universe), words_((universe + 63) / 64, 0) {}

    std::size_t universe() const { return size_; }

    bool contains(NodeId v) const {
        return (words_[static_cast<std::size_t>(v) >> 6] >> (static_cast<std::size_t>(v) & 63)) & 1u;
    }
    void insert(NodeId v) { words_[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (static_cast<std::size_t>(v) & 63); }
    void erase(NodeId v) { words_[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (static_cast<std::size_t>(v) & 63)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool is_subset_of(const NodeSet& other) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }
    bool intersects(const NodeSet& other) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & other.words_[k]) return true;
        return false;
    }

    NodeSet& operator&=(const NodeSet& other) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }
    NodeSet& operator|=(const NodeSet& other) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }
    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }

    bool operator==(const NodeSet&) const = default;

    std::vector<NodeId> members() const {
        std::vector<NodeId> out;
        for (std::size_t v = 0; v < size_; ++v)
            if (contains(static_cast<NodeId>(v))) out.push_back(static_cast<NodeId>(v));
        return out;
    }

    // Hex digits, most significant first; node 0 is the lowest bit of the last digit.
    std::string to_hex() const;
    static NodeSet from_hex(std::string_view hex, std::size_t universe);

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace labellens

#endif  // LABELLENS_NODE_SET_HPP
