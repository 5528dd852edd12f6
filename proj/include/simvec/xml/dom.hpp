#pragma once

// Small ordered XML tree backed by expat. Attribute order and text nodes
// (including whitespace) are kept, so parse -> write reproduces any document
// this writer produced.

#include <expat.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace simvec::xml {

class XmlError : public std::runtime_error {
 public:
  XmlError(const std::string& what, long line, long column)
      : std::runtime_error("XML error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  [[nodiscard]] long line() const noexcept { return line_; }
  [[nodiscard]] long column() const noexcept { return column_; }

 private:
  long line_;
  long column_;
};

struct Node;

struct Text {
  std::string value;
};

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;

  [[nodiscard]] const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }

  [[nodiscard]] std::optional<std::string> get(std::string_view key) const {
    if (const auto* v = attr(key)) return *v;
    return std::nullopt;
  }

  /// Replaces the value in place, or appends the attribute when missing.
  void set(std::string_view key, std::string value) {
    for (auto& [k, v] : attributes) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    attributes.emplace_back(std::string(key), std::move(value));
  }

  bool erase(std::string_view key) {
    for (auto it = attributes.begin(); it != attributes.end(); ++it) {
      if (it->first == key) {
        attributes.erase(it);
        return true;
      }
    }
    return false;
  }

  /// Concatenated character data of this element and its descendants.
  [[nodiscard]] std::string text_content() const;
};

struct Node {
  std::variant<Element, Text> value;

  [[nodiscard]] bool is_element() const noexcept { return std::holds_alternative<Element>(value); }
  Element& element() { return std::get<Element>(value); }
  [[nodiscard]] const Element& element() const { return std::get<Element>(value); }
};

inline std::string Element::text_content() const {
  std::string out;
  for (const Node& n : children) {
    if (const auto* t = std::get_if<Text>(&n.value)) {
      out += t->value;
    } else {
      out += std::get<Element>(n.value).text_content();
    }
  }
  return out;
}

struct Document {
  Element root;
};

namespace detail {

struct Builder {
  std::vector<Element*> stack;
  Element root;
  bool has_root = false;

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<Builder*>(data);
    Element el;
    el.name = name;
    for (int i = 0; atts[i]; i += 2) el.attributes.emplace_back(atts[i], atts[i + 1]);
    if (self->stack.empty()) {
      self->root = std::move(el);
      self->has_root = true;
      self->stack.push_back(&self->root);
    } else {
      auto& kids = self->stack.back()->children;
      kids.push_back(Node{std::move(el)});
      self->stack.push_back(&std::get<Element>(kids.back().value));
    }
  }

  static void on_end(void* data, const XML_Char*) { static_cast<Builder*>(data)->stack.pop_back(); }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(data);
    if (self->stack.empty()) return;
    auto& kids = self->stack.back()->children;
    if (!kids.empty()) {
      if (auto* t = std::get_if<Text>(&kids.back().value)) {
        t->value.append(s, static_cast<std::size_t>(len));
        return;
      }
    }
    kids.push_back(Node{Text{std::string(s, static_cast<std::size_t>(len))}});
  }
};

struct ParserDeleter {
  void operator()(XML_Parser p) const noexcept { XML_ParserFree(p); }
};

inline void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out += c;
        }
        break;
      default: out += c;
    }
  }
}

inline void write_element(std::string& out, const Element& el) {
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    escape_into(out, v, true);
    out += '"';
  }
  if (el.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  for (const Node& n : el.children) {
    if (const auto* t = std::get_if<Text>(&n.value)) {
      escape_into(out, t->value, false);
    } else {
      write_element(out, std::get<Element>(n.value));
    }
  }
  out += "</";
  out += el.name;
  out += '>';
}

}  // namespace detail

/// Parses well-formed XML. Comments, processing instructions and the doctype
/// are dropped; entity references are decoded.
inline Document parse(std::string_view source) {
  std::unique_ptr<XML_ParserStruct, detail::ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw std::bad_alloc();
  detail::Builder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &detail::Builder::on_start, &detail::Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &detail::Builder::on_text);
  if (XML_Parse(parser.get(), source.data(), static_cast<int>(source.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw XmlError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                   static_cast<long>(XML_GetCurrentLineNumber(parser.get())),
                   static_cast<long>(XML_GetCurrentColumnNumber(parser.get())));
  }
  if (!builder.has_root) throw XmlError("no root element", 1, 0);
  return Document{std::move(builder.root)};
}

/// Serializes without an XML declaration and without reformatting.
inline std::string write(const Document& doc) {
  std::string out;
  detail::write_element(out, doc.root);
  return out;
}

inline std::string write(const Element& el) {
  std::string out;
  detail::write_element(out, el);
  return out;
}

}  // namespace simvec::xml
