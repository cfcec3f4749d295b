// Copyright 2025 The CrisisLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRISISLENS_UNICODE_HPP
#define CRISISLENS_UNICODE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crisislens {

// UTF-8 decode/encode plus the slice of canonical normalization this corpus
// needs: full NFC for the Bengali block (the only scripts we ingest are
// Bangla and ASCII). Codepoints outside the tables pass through unchanged.

inline std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
            unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x1F) << 6) | (b1 & 0x3F);
                len = 2;
                if (cp < 0x80) cp = 0xFFFD;  // overlong
            }
        } else if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
            unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(b1 & 0x3F) << 6) | (b2 & 0x3F);
                len = 3;
                if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
            }
        } else if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
            unsigned char b1 = static_cast<unsigned char>(s[i + 1]);
            unsigned char b2 = static_cast<unsigned char>(s[i + 2]);
            unsigned char b3 = static_cast<unsigned char>(s[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x07) << 18) | (char32_t(b1 & 0x3F) << 12) |
                     (char32_t(b2 & 0x3F) << 6) | (b3 & 0x3F);
                len = 4;
                if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

inline std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

// Canonical combining class; nonzero only for the Bengali marks we reorder.
inline int combining_class(char32_t cp) {
    switch (cp) {
        case 0x09BC: return 7;   // nukta
        case 0x09CD: return 9;   // virama (hasanta)
        default: return 0;
    }
}

// Canonical decompositions in the Bengali block. U+09DC/09DD/09DF are
// composition exclusions: NFC leaves them decomposed.
inline bool canonical_decompose(char32_t cp, char32_t& a, char32_t& b) {
    switch (cp) {
        case 0x09CB: a = 0x09C7; b = 0x09BE; return true;  // vowel sign O
        case 0x09CC: a = 0x09C7; b = 0x09D7; return true;  // vowel sign AU
        case 0x09DC: a = 0x09A1; b = 0x09BC; return true;  // RRA
        case 0x09DD: a = 0x09A2; b = 0x09BC; return true;  // RHA
        case 0x09DF: a = 0x09AF; b = 0x09BC; return true;  // YYA
        default: return false;
    }
}

inline char32_t canonical_compose(char32_t a, char32_t b) {
    if (a == 0x09C7 && b == 0x09BE) return 0x09CB;
    if (a == 0x09C7 && b == 0x09D7) return 0x09CC;
    return 0;  // excluded or not composable
}

// NFC over the scoped tables above: decompose, canonically reorder, recompose.
inline std::string nfc(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);

    std::vector<char32_t> dec;
    dec.reserve(cps.size() + 4);
    for (char32_t cp : cps) {
        char32_t a, b;
        if (canonical_decompose(cp, a, b)) {
            dec.push_back(a);
            dec.push_back(b);
        } else {
            dec.push_back(cp);
        }
    }

    // canonical ordering of combining marks (bubble; sequences are short)
    for (std::size_t i = 1; i < dec.size(); ++i) {
        int cc = combining_class(dec[i]);
        if (cc == 0) continue;
        std::size_t j = i;
        while (j > 0 && combining_class(dec[j - 1]) > cc) {
            std::swap(dec[j - 1], dec[j]);
            --j;
        }
    }

    // canonical composition (UAX #15 blocking rule)
    std::vector<char32_t> out;
    out.reserve(dec.size());
    std::ptrdiff_t starter = -1;
    for (char32_t cp : dec) {
        int cc = combining_class(cp);
        if (starter >= 0) {
            bool not_blocked = (static_cast<std::ptrdiff_t>(out.size()) - 1 == starter) ||
                               (combining_class(out.back()) < cc);
            if (not_blocked) {
                char32_t comp = canonical_compose(out[static_cast<std::size_t>(starter)], cp);
                if (comp != 0) {
                    out[static_cast<std::size_t>(starter)] = comp;
                    continue;
                }
            }
        }
        out.push_back(cp);
        if (cc == 0) starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
    }
    return encode_utf8(out);
}

inline bool is_whitespace(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0:
        case 0x1680: case 0x200B: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Punctuation and symbol codepoints removed by preprocessing stage 1.
// Bangla letters, digits, combining marks and ZWJ/ZWNJ all fall outside
// these ranges and are preserved.
inline bool is_punct_or_symbol(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    if (cp >= 0xA1 && cp <= 0xBF) return true;  // Latin-1 punctuation/symbols
    if (cp == 0xD7 || cp == 0xF7) return true;
    if (cp == 0x0964 || cp == 0x0965) return true;  // danda, double danda
    if (cp == 0x09F2 || cp == 0x09F3 || cp == 0x09FA || cp == 0x09FB || cp == 0x09FD)
        return true;  // Bengali currency and signs
    if (cp >= 0x2010 && cp <= 0x2027) return true;   // general punctuation
    if (cp >= 0x202A && cp <= 0x202E) return true;   // bidi controls
    if (cp >= 0x2030 && cp <= 0x205E) return true;
    if (cp >= 0x2060 && cp <= 0x2064) return true;
    if (cp >= 0x20A0 && cp <= 0x20CF) return true;   // currency symbols
    if (cp >= 0x2100 && cp <= 0x2BFF) return true;   // letterlike..misc symbols, arrows, math
    if (cp >= 0x3001 && cp <= 0x303F) return true;   // CJK punctuation
    if (cp >= 0xFE50 && cp <= 0xFE6F) return true;   // small form variants
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;   // fullwidth punctuation
    if (cp >= 0xFF1A && cp <= 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF40) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    return false;
}

}  // namespace crisislens

#endif  // CRISISLENS_UNICODE_HPP
