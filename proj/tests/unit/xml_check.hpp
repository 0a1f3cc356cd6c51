#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace testing {

struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
};

// Minimal well-formedness check for the SVG we emit: balanced tags, quoted
// attributes, no stray '<' or '&'. Fills `elements` in document order.
inline bool well_formed_xml(const std::string& doc, std::vector<XmlElement>* elements = nullptr,
                            std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0, roots = 0;
  while (i < doc.size()) {
    if (doc[i] == '&') {
      auto semi = doc.find(';', i);
      if (semi == std::string::npos || semi - i > 6) return fail("bad entity");
      i = semi + 1;
      continue;
    }
    if (doc[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(doc[i]))) {
        return fail("text outside root");
      }
      ++i;
      continue;
    }
    if (doc.compare(i, 2, "<?") == 0) {
      auto end = doc.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    if (doc.compare(i, 4, "<!--") == 0) {
      auto end = doc.find("-->", i);
      if (end == std::string::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    auto end = doc.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (!tag.empty() && tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return fail("mismatched </" + tag + ">");
      stack.pop_back();
      continue;
    }
    bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.pop_back();
    XmlElement el;
    std::size_t p = 0;
    while (p < tag.size() && !std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
    el.name = tag.substr(0, p);
    if (el.name.empty()) return fail("empty tag name");
    while (p < tag.size()) {
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      if (p >= tag.size()) break;
      auto eq = tag.find('=', p);
      if (eq == std::string::npos || eq + 1 >= tag.size() || tag[eq + 1] != '"') {
        return fail("unquoted attribute in <" + el.name + ">");
      }
      auto close = tag.find('"', eq + 2);
      if (close == std::string::npos) return fail("unterminated attribute");
      std::string key = tag.substr(p, eq - p);
      if (el.attrs.count(key)) return fail("duplicate attribute " + key);
      el.attrs[key] = tag.substr(eq + 2, close - eq - 2);
      if (el.attrs[key].find('<') != std::string::npos) return fail("'<' in attribute");
      p = close + 1;
    }
    if (stack.empty()) {
      if (++roots > 1) return fail("more than one root element");
    }
    if (elements) elements->push_back(el);
    if (!self_closing) stack.push_back(el.name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return roots == 1 || fail("no root element");
}

inline std::size_t count_class(const std::vector<XmlElement>& els, const std::string& cls) {
  std::size_t n = 0;
  for (const auto& e : els) {
    auto it = e.attrs.find("class");
    n += it != e.attrs.end() && it->second == cls;
  }
  return n;
}

}  // namespace testing
