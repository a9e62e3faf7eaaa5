#include "labellens/node_set.hpp"

#include <stdexcept>

namespace labellens {

std::string NodeSet::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t ndigits = size_ == 0 ? 1 : (size_ + 3) / 4;
    std::string out(ndigits, '0');
    for (std::size_t d = 0; d < ndigits; ++d) {
        unsigned nibble = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t v = d * 4 + b;
            if (v < size_ && contains(static_cast<NodeId>(v))) nibble |= 1u << b;
        }
        out[ndigits - 1 - d] = digits[nibble];
    }
    return out;
}

NodeSet NodeSet::from_hex(std::string_view hex, std::size_t universe) {
    NodeSet s(universe);
    const std::size_t ndigits = hex.size();
    for (std::size_t d = 0; d < ndigits; ++d) {
        const char c = hex[ndigits - 1 - d];
        unsigned nibble;
        if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A' + 10);
        else throw std::invalid_argument("invalid hex digit in node set: " + std::string(hex));
        for (std::size_t b = 0; b < 4; ++b) {
            if (!(nibble & (1u << b))) continue;
            const std::size_t v = d * 4 + b;
            if (v >= universe) throw std::invalid_argument("node set hex exceeds universe: " + std::string(hex));
            s.insert(static_cast<NodeId>(v));
        }
    }
    return s;
}

}  // namespace labellens
