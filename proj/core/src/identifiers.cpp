/** \file  identifiers.cpp
 *  \brief ISBN check digits, heading normalization (ICU) and union-find work clustering.
 */
#include "lca/identifiers.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lca/errors.hpp"

namespace lca {

namespace {

bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }

std::string strip_separators(std::string_view raw) {
    std::string compact;
    compact.reserve(raw.size());
    for (const char ch : raw)
        if (ch != '-' && ch != ' ')
            compact.push_back(ch);
    return compact;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t size) : parent_(size) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t item) {
        while (parent_[item] != item) {
            parent_[item] = parent_[parent_[item]];
            item = parent_[item];
        }
        return item;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

} // unnamed namespace

char isbn10_check_digit(std::string_view first_nine) {
    int sum = 0;
    for (std::size_t i = 0; i < 9; ++i)
        sum += static_cast<int>(10 - i) * (first_nine.at(i) - '0');
    const int check = (11 - sum % 11) % 11;
    return check == 10 ? 'X' : static_cast<char>('0' + check);
}

char isbn13_check_digit(std::string_view first_twelve) {
    int sum = 0;
    for (std::size_t i = 0; i < 12; ++i)
        sum += (i % 2 == 0 ? 1 : 3) * (first_twelve.at(i) - '0');
    return static_cast<char>('0' + (10 - sum % 10) % 10);
}

Isbn normalize_isbn(std::string_view raw) {
    std::string compact = strip_separators(raw);
    if (compact.size() == 10) {
        if (compact[9] == 'x')
            compact[9] = 'X';
        if (!std::all_of(compact.begin(), compact.begin() + 9, is_digit)
            || !(is_digit(compact[9]) || compact[9] == 'X'))
            throw IsbnFormatError("ISBN-10 must be 9 digits followed by a digit or X: " + std::string(raw));
        if (isbn10_check_digit(compact) != compact[9])
            throw IsbnChecksumError("ISBN-10 check digit mismatch: " + std::string(raw));
        std::string digits = "978" + compact.substr(0, 9);
        digits.push_back(isbn13_check_digit(digits));
        return Isbn(std::move(digits), std::string(raw));
    }
    if (compact.size() == 13) {
        if (!std::all_of(compact.begin(), compact.end(), is_digit))
            throw IsbnFormatError("ISBN-13 must be 13 digits: " + std::string(raw));
        if (isbn13_check_digit(compact) != compact[12])
            throw IsbnChecksumError("ISBN-13 check digit mismatch: " + std::string(raw));
        return Isbn(std::move(compact), std::string(raw));
    }
    throw IsbnFormatError("ISBN must have 10 or 13 characters after removing separators: " + std::string(raw));
}

std::optional<Isbn> try_normalize_isbn(std::string_view raw) {
    try {
        return normalize_isbn(raw);
    } catch (const IsbnFormatError &) {
    } catch (const IsbnChecksumError &) {
    }
    return std::nullopt;
}

std::string isbn13_to_isbn10(const Isbn &isbn) {
    const std::string &digits = isbn.digits();
    if (digits.compare(0, 3, "978") != 0)
        throw NotConvertibleError("only 978-prefixed ISBNs have a 10-digit form: " + digits);
    std::string isbn10 = digits.substr(3, 9);
    isbn10.push_back(isbn10_check_digit(isbn10));
    return isbn10;
}

std::string normalize_heading(std::string_view text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2 *nfkd = icu::Normalizer2::getNFKDInstance(status);
    if (U_FAILURE(status))
        throw Error(std::string("ICU NFKD normalizer unavailable: ") + u_errorName(status));

    icu::UnicodeString decomposed =
        nfkd->normalize(icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))), status);
    if (U_FAILURE(status))
        throw Error(std::string("normalization failed: ") + u_errorName(status));
    decomposed.foldCase();

    icu::UnicodeString folded;
    bool pending_space = false;
    for (int32_t i = 0; i < decomposed.length();) {
        const UChar32 cp = decomposed.char32At(i);
        i += U16_LENGTH(cp);
        const auto category = static_cast<UCharCategory>(u_charType(cp));
        if (category == U_NON_SPACING_MARK || category == U_ENCLOSING_MARK || u_ispunct(cp) || u_iscntrl(cp))
            continue;
        if (u_isUWhiteSpace(cp)) {
            pending_space = !folded.isEmpty();
            continue;
        }
        if (pending_space) {
            folded.append(static_cast<UChar>(' '));
            pending_space = false;
        }
        folded.append(cp);
    }

    std::string result;
    folded.toUTF8String(result);
    return result;
}

std::string primary_contributor(const BookRecord &record) {
    for (const Role role : {Role::author, Role::creator})
        for (const auto &contributor : record.contributors)
            if (contributor.role == role)
                return contributor.name;
    return record.contributors.empty() ? std::string() : record.contributors.front().name;
}

WorkKey work_key(const BookRecord &record) {
    WorkKey key{normalize_heading(record.title), normalize_heading(primary_contributor(record))};
    if (key.normalized_title.empty())
        throw KeyError("record " + record.record_id + " has no usable title");
    return key;
}

std::vector<WorkCluster> cluster_works(const CatalogSnapshot &snapshot) {
    const auto records = snapshot.records();
    DisjointSets sets(records.size());
    std::map<std::uint64_t, std::size_t> by_oclc;
    std::map<std::string, std::size_t> by_isbn;
    std::map<WorkKey, std::size_t> by_key;
    std::vector<std::optional<WorkKey>> keys(records.size());

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &record = records[i];
        if (record.oclc)
            sets.unite(i, by_oclc.try_emplace(record.oclc->value(), i).first->second);
        for (const auto &isbn : record.isbns)
            sets.unite(i, by_isbn.try_emplace(isbn.digits(), i).first->second);
        try {
            keys[i] = work_key(record);
            sets.unite(i, by_key.try_emplace(*keys[i], i).first->second);
        } catch (const KeyError &) {
            // untitled records link through identifiers only
        }
    }

    std::map<std::size_t, WorkCluster> by_root;
    for (std::size_t i = 0; i < records.size(); ++i)
        by_root[sets.find(i)].member_record_ids.insert(records[i].record_id);

    std::vector<WorkCluster> clusters;
    clusters.reserve(by_root.size());
    for (auto &[root, cluster] : by_root) {
        cluster.cluster_id = *cluster.member_record_ids.begin();
        std::optional<WorkKey> representative;
        for (const auto &member : cluster.member_record_ids) {
            const auto index = *snapshot.record_index(member);
            if (keys[index]) {
                representative = keys[index];
                break;
            }
        }
        cluster.work_key = representative.value_or(
            WorkKey{"", normalize_heading(primary_contributor(*snapshot.find_record(cluster.cluster_id)))});
        clusters.push_back(std::move(cluster));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const WorkCluster &a, const WorkCluster &b) { return a.cluster_id < b.cluster_id; });
    return clusters;
}

} // namespace lca
