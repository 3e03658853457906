#include "json_codec.hpp"

#include <limits>

#include "lca/errors.hpp"
#include "lca/identifiers.hpp"

namespace lca::codec {

namespace {

const nlohmann::json &required(const nlohmann::json &object, const char *field) {
    const auto match = object.find(field);
    if (match == object.end())
        throw InvalidValueError(std::string("missing field \"") + field + "\"");
    return *match;
}

const nlohmann::json *optional_field(const nlohmann::json &object, const char *field) {
    const auto match = object.find(field);
    return match == object.end() ? nullptr : &*match;
}

std::string as_string(const nlohmann::json &value, const char *field) {
    if (!value.is_string())
        throw InvalidValueError(std::string("field \"") + field + "\" must be a string");
    return value.get<std::string>();
}

std::uint64_t as_unsigned(const nlohmann::json &value, const char *field) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
        throw InvalidValueError(std::string("field \"") + field + "\" must be a non-negative integer");
    return value.get<std::uint64_t>();
}

const nlohmann::json &as_array(const nlohmann::json &value, const char *field) {
    if (!value.is_array())
        throw InvalidValueError(std::string("field \"") + field + "\" must be an array");
    return value;
}

} // unnamed namespace

OrderedJson encode_record(const BookRecord &record) {
    OrderedJson object;
    object["id"] = record.record_id;
    if (record.oclc)
        object["oclc"] = record.oclc->value();
    object["isbns"] = OrderedJson::array();
    for (const auto &isbn : record.isbns)
        object["isbns"].push_back(isbn.original_form());
    object["title"] = record.title;
    object["contributors"] = OrderedJson::array();
    for (const auto &contributor : record.contributors)
        object["contributors"].push_back(OrderedJson::array({contributor.name, std::string(to_string(contributor.role))}));
    if (record.year)
        object["year"] = *record.year;
    if (record.language)
        object["lang"] = *record.language;
    if (record.lc_class)
        object["lc"] = record.lc_class->value();
    object["format"] = std::string(to_string(record.format));
    if (record.citations)
        object["citations"] = *record.citations;
    return object;
}

OrderedJson encode_library(const LibraryOrg &library) {
    OrderedJson object;
    object["id"] = library.library_id;
    object["name"] = library.name;
    object["country"] = library.country;
    object["kind"] = std::string(to_string(library.kind));
    object["memberships"] = OrderedJson::array();
    for (const auto &tag : library.memberships)
        object["memberships"].push_back(tag);
    return object;
}

OrderedJson encode_holding(const Holding &holding) {
    OrderedJson object;
    object["record"] = holding.record_id;
    object["library"] = holding.library_id;
    object["channel"] = std::string(to_string(holding.channel));
    return object;
}

BookRecord decode_record(const nlohmann::json &object) {
    BookRecord record;
    record.record_id = as_string(required(object, "id"), "id");
    record.title = as_string(required(object, "title"), "title");
    if (const auto *oclc = optional_field(object, "oclc"))
        record.oclc = OclcNumber(as_unsigned(*oclc, "oclc"));
    if (const auto *isbns = optional_field(object, "isbns"))
        for (const auto &isbn : as_array(*isbns, "isbns"))
            record.isbns.push_back(normalize_isbn(as_string(isbn, "isbns")));
    if (const auto *contributors = optional_field(object, "contributors"))
        for (const auto &pair : as_array(*contributors, "contributors")) {
            if (!pair.is_array() || pair.size() != 2)
                throw InvalidValueError("contributors entries must be [name, role] pairs");
            const auto role_name = as_string(pair[1], "contributors");
            const auto role = parse_role(role_name);
            if (!role)
                throw InvalidValueError("unknown contributor role \"" + role_name + "\"");
            record.contributors.push_back({as_string(pair[0], "contributors"), *role});
        }
    if (const auto *year = optional_field(object, "year")) {
        if (!year->is_number_integer())
            throw InvalidValueError("field \"year\" must be an integer");
        const auto value = year->get<std::int64_t>();
        if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
            throw InvalidValueError("field \"year\" out of range");
        record.year = static_cast<int>(value);
    }
    if (const auto *language = optional_field(object, "lang"))
        record.language = as_string(*language, "lang");
    if (const auto *lc = optional_field(object, "lc"))
        record.lc_class = ClassCode(as_string(*lc, "lc"));
    if (const auto *format = optional_field(object, "format")) {
        const auto name = as_string(*format, "format");
        const auto parsed = parse_format(name);
        if (!parsed)
            throw InvalidValueError("unknown format \"" + name + "\"");
        record.format = *parsed;
    }
    if (const auto *citations = optional_field(object, "citations"))
        record.citations = as_unsigned(*citations, "citations");
    return record;
}

LibraryOrg decode_library(const nlohmann::json &object) {
    LibraryOrg library;
    library.library_id = as_string(required(object, "id"), "id");
    library.name = as_string(required(object, "name"), "name");
    library.country = as_string(required(object, "country"), "country");
    const auto kind_name = as_string(required(object, "kind"), "kind");
    const auto kind = parse_library_kind(kind_name);
    if (!kind)
        throw InvalidValueError("unknown library kind \"" + kind_name + "\"");
    library.kind = *kind;
    if (const auto *memberships = optional_field(object, "memberships"))
        for (const auto &tag : as_array(*memberships, "memberships"))
            library.memberships.insert(as_string(tag, "memberships"));
    return library;
}

Holding decode_holding(const nlohmann::json &object) {
    Holding holding;
    holding.record_id = as_string(required(object, "record"), "record");
    holding.library_id = as_string(required(object, "library"), "library");
    if (const auto *channel = optional_field(object, "channel")) {
        const auto name = as_string(*channel, "channel");
        const auto parsed = parse_channel(name);
        if (!parsed)
            throw InvalidValueError("unknown acquisition channel \"" + name + "\"");
        holding.channel = *parsed;
    }
    return holding;
}

} // namespace lca::codec
