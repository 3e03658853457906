#include "xml.hpp"

#include <map>
#include <optional>

#include "lca/errors.hpp"

namespace lca::xml {

namespace {

constexpr std::string_view kXmlNamespace = "http://www.w3.org/XML/1998/namespace";

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n'; }

bool is_name_start(char ch) {
    const auto byte = static_cast<unsigned char>(ch);
    return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || ch == '_' || ch == ':' || byte >= 0x80;
}

bool is_name_char(char ch) {
    return is_name_start(ch) || (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
}

void append_utf8(std::string &out, char32_t cp) {
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

class Reader {
public:
    explicit Reader(std::string_view input) : input_(input) {}

    std::vector<Element> run();

private:
    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError("XML error at byte " + std::to_string(pos_) + ": " + what);
    }

    bool starts_with(std::string_view token) const { return input_.substr(pos_).starts_with(token); }
    bool at_end() const { return pos_ >= input_.size(); }

    void skip_space() {
        while (!at_end() && is_space(input_[pos_]))
            ++pos_;
    }

    void skip_past(std::string_view terminator, const char *construct) {
        const auto end = input_.find(terminator, pos_);
        if (end == std::string_view::npos)
            fail(std::string("unterminated ") + construct);
        pos_ = end + terminator.size();
    }

    std::string read_name() {
        if (at_end() || !is_name_start(input_[pos_]))
            fail("expected a name");
        const auto begin = pos_;
        while (!at_end() && is_name_char(input_[pos_]))
            ++pos_;
        return std::string(input_.substr(begin, pos_ - begin));
    }

    void decode_into(std::string &out, std::string_view raw);
    void skip_doctype();
    void read_start_tag();
    void read_end_tag();
    void read_text();
    std::string resolve(std::string_view prefix) const;
    void close_scope(std::size_t element);

    std::string_view input_;
    std::size_t pos_ = 0;
    std::vector<Element> elements_;
    std::vector<std::size_t> open_;
    bool root_closed_ = false;
    // Namespace declarations per element: prefix ("" for default) -> uri.
    /// Prefixes each element declared, so its bindings can be popped when it closes.
    std::vector<std::vector<std::string>> declarations_;
    /// In-scope URIs per prefix, innermost last.
    std::map<std::string, std::vector<std::string>, std::less<>> bindings_;
};

void Reader::decode_into(std::string &out, std::string_view raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char ch = raw[i];
        if (ch != '&') {
            out.push_back(ch);
            continue;
        }
        const auto semicolon = raw.find(';', i);
        if (semicolon == std::string_view::npos)
            fail("unterminated entity reference");
        const auto entity = raw.substr(i + 1, semicolon - i - 1);
        if (entity == "lt")
            out.push_back('<');
        else if (entity == "gt")
            out.push_back('>');
        else if (entity == "amp")
            out.push_back('&');
        else if (entity == "quot")
            out.push_back('"');
        else if (entity == "apos")
            out.push_back('\'');
        else if (entity.size() > 1 && entity[0] == '#') {
            const bool hex = entity[1] == 'x';
            const auto digits = entity.substr(hex ? 2 : 1);
            if (digits.empty() || digits.size() > 8)
                fail("bad character reference");
            char32_t cp = 0;
            for (const char digit : digits) {
                int value;
                if (digit >= '0' && digit <= '9')
                    value = digit - '0';
                else if (hex && digit >= 'a' && digit <= 'f')
                    value = digit - 'a' + 10;
                else if (hex && digit >= 'A' && digit <= 'F')
                    value = digit - 'A' + 10;
                else
                    fail("bad character reference");
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(value);
            }
            if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
                fail("character reference out of range");
            append_utf8(out, cp);
        } else {
            fail("unknown entity &" + std::string(entity) + ";");
        }
        i = semicolon;
    }
}

void Reader::skip_doctype() {
    int bracket_depth = 0;
    while (!at_end()) {
        const char ch = input_[pos_++];
        if (ch == '[')
            ++bracket_depth;
        else if (ch == ']')
            --bracket_depth;
        else if (ch == '>' && bracket_depth <= 0)
            return;
    }
    fail("unterminated DOCTYPE");
}

std::string Reader::resolve(std::string_view prefix) const {
    if (prefix == "xml")
        return std::string(kXmlNamespace);
    const auto match = bindings_.find(prefix);
    return match == bindings_.end() || match->second.empty() ? std::string() : match->second.back();
}

void Reader::close_scope(std::size_t element) {
    for (const auto &prefix : declarations_[element])
        bindings_.find(prefix)->second.pop_back();
}

void Reader::read_start_tag() {
    ++pos_; // '<'
    if (root_closed_)
        fail("content after the root element");
    Element element;
    element.name = read_name();
    std::map<std::string, std::string, std::less<>> declared;
    for (;;) {
        const auto before = pos_;
        skip_space();
        if (at_end())
            fail("unterminated start tag");
        if (starts_with("/>") || input_[pos_] == '>')
            break;
        if (pos_ == before)
            fail("expected whitespace before attribute");
        Attribute attribute;
        attribute.name = read_name();
        skip_space();
        if (at_end() || input_[pos_] != '=')
            fail("expected '=' after attribute name");
        ++pos_;
        skip_space();
        if (at_end() || (input_[pos_] != '"' && input_[pos_] != '\''))
            fail("expected quoted attribute value");
        const char quote = input_[pos_++];
        const auto close = input_.find(quote, pos_);
        if (close == std::string_view::npos)
            fail("unterminated attribute value");
        const auto raw = input_.substr(pos_, close - pos_);
        if (raw.find('<') != std::string_view::npos)
            fail("'<' in attribute value");
        decode_into(attribute.value, raw);
        pos_ = close + 1;
        for (const auto &existing : element.attributes)
            if (existing.name == attribute.name)
                fail("duplicate attribute " + attribute.name);
        if (attribute.name == "xmlns")
            declared[""] = attribute.value;
        else if (attribute.name.starts_with("xmlns:"))
            declared[attribute.name.substr(6)] = attribute.value;
        element.attributes.push_back(std::move(attribute));
    }
    const bool self_closing = input_[pos_] == '/';
    pos_ += self_closing ? 2 : 1;

    const auto index = elements_.size();
    element.parent = open_.empty() ? Element::npos : open_.back();
    if (element.parent == Element::npos && index != 0)
        fail("more than one root element");
    elements_.push_back(std::move(element));
    std::vector<std::string> prefixes;
    for (auto &[prefix, uri] : declared) {
        bindings_[prefix].push_back(std::move(uri));
        prefixes.push_back(prefix);
    }
    declarations_.push_back(std::move(prefixes));
    if (elements_[index].parent != Element::npos)
        elements_[elements_[index].parent].children.push_back(index);
    elements_[index].namespace_uri = resolve(elements_[index].prefix());

    if (self_closing) {
        close_scope(index);
        if (open_.empty())
            root_closed_ = true;
    } else {
        open_.push_back(index);
    }
}

void Reader::read_end_tag() {
    pos_ += 2; // "</"
    const auto name = read_name();
    skip_space();
    if (at_end() || input_[pos_] != '>')
        fail("expected '>' in end tag");
    ++pos_;
    if (open_.empty())
        fail("unexpected end tag </" + name + ">");
    if (elements_[open_.back()].name != name)
        fail("mismatched end tag </" + name + ">, expected </" + elements_[open_.back()].name + ">");
    close_scope(open_.back());
    open_.pop_back();
    if (open_.empty())
        root_closed_ = true;
}

void Reader::read_text() {
    const auto end = std::min(input_.find('<', pos_), input_.size());
    const auto raw = input_.substr(pos_, end - pos_);
    pos_ = end;
    if (open_.empty()) {
        for (const char ch : raw)
            if (!is_space(ch))
                fail("character data outside the root element");
        return;
    }
    decode_into(elements_[open_.back()].text, raw);
}

std::vector<Element> Reader::run() {
    if (input_.starts_with("\xEF\xBB\xBF"))
        pos_ = 3;
    while (!at_end()) {
        if (starts_with("<?")) {
            skip_past("?>", "processing instruction");
        } else if (starts_with("<!--")) {
            skip_past("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
            if (open_.empty())
                fail("CDATA outside the root element");
            pos_ += 9;
            const auto end = input_.find("]]>", pos_);
            if (end == std::string_view::npos)
                fail("unterminated CDATA section");
            elements_[open_.back()].text.append(input_.substr(pos_, end - pos_));
            pos_ = end + 3;
        } else if (starts_with("<!DOCTYPE")) {
            if (!elements_.empty())
                fail("DOCTYPE after the root element");
            skip_doctype();
        } else if (starts_with("</")) {
            read_end_tag();
        } else if (input_[pos_] == '<') {
            read_start_tag();
        } else {
            read_text();
        }
    }
    if (elements_.empty())
        fail("no root element");
    if (!open_.empty())
        fail("unclosed element <" + elements_[open_.back()].name + ">");
    return std::move(elements_);
}

} // unnamed namespace

std::string_view Element::local_name() const {
    const auto colon = name.find(':');
    return colon == std::string::npos ? std::string_view(name) : std::string_view(name).substr(colon + 1);
}

std::string_view Element::prefix() const {
    const auto colon = name.find(':');
    return colon == std::string::npos ? std::string_view() : std::string_view(name).substr(0, colon);
}

const std::string *Element::attribute(std::string_view attribute_name) const {
    for (const auto &attribute : attributes)
        if (attribute.name == attribute_name)
            return &attribute.value;
    return nullptr;
}

Document Document::parse(std::string_view input) {
    Document document;
    document.elements_ = Reader(input).run();
    return document;
}

} // namespace lca::xml
