#include "dcyt/core.hpp"

#include <array>
#include <sstream>

namespace dcyt {

char op_letter(OpKind kind) {
    switch (kind) {
        case OpKind::Create: return 'C';
        case OpKind::Read: return 'R';
        case OpKind::Update: return 'U';
        case OpKind::Delete: return 'D';
        case OpKind::BestRead: return 'B';
        case OpKind::Influenced: return 'I';
    }
    throw ModelError("invalid operation kind");
}

OpKind op_from_letter(char letter) {
    switch (letter) {
        case 'C': return OpKind::Create;
        case 'R': return OpKind::Read;
        case 'U': return OpKind::Update;
        case 'D': return OpKind::Delete;
        case 'B': return OpKind::BestRead;
        case 'I': return OpKind::Influenced;
        default:
            throw ModelError(std::string("unknown operation letter '") + letter + "'");
    }
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << (v.severity == Severity::Error ? "error" : "warning") << " [" << v.rule << "]";
        if (!v.function_id.empty()) out << " function=" << v.function_id;
        if (!v.entity_id.empty()) out << " entity=" << v.entity_id;
        out << ": " << v.detail << "\n";
    }
    return out.str();
}

std::uint64_t fnv1a64(std::uint64_t state, const std::string& bytes) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 1099511628211ull;
    }
    // separator byte so that ("ab","c") and ("a","bc") hash differently
    state ^= 0xff;
    state *= 1099511628211ull;
    return state;
}

std::uint64_t fnv1a64(std::uint64_t state, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        state ^= (value >> (i * 8)) & 0xff;
        state *= 1099511628211ull;
    }
    return state;
}

std::string hash_hex(std::uint64_t value) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace dcyt
