#pragma once

// Instance documents (JSON) and result documents.
//
//   {"alphabet": "abc",
//    "vars": [{"name": "x", "regex": "(ab)+"}],
//    "needle": [{"lit": "ab"}, {"var": "x"}],
//    "haystack": [{"var": "x"}, {"var": "z"}]}

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "notcontains/driver.hpp"
#include "notcontains/regex.hpp"

namespace notcontains {

using Json = nlohmann::ordered_json;

struct Document {
  Instance inst;
  std::map<std::string, std::string> regex;  // as written
};

namespace detail {

inline void expect_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw Error(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* s) { return k == s; }) == keys.end()) {
      throw Error(where + ": unexpected key '" + k + "'");
    }
  }
  for (const char* k : keys) {
    if (!obj.contains(k)) throw Error(where + ": missing key '" + std::string(k) + "'");
  }
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline Term parse_term(const Json& arr, const Document& doc, const std::string& where) {
  if (!arr.is_array()) throw Error(where + ": expected an array");
  Term t;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& item = arr[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!item.is_object() || item.size() != 1) throw Error(at + ": expected {\"lit\": ...} or {\"var\": ...}");
    if (item.contains("lit")) {
      if (!item["lit"].is_string()) throw Error(at + ": \"lit\" must be a string");
      try {
        t.push_back(Lit{doc.inst.alphabet.encode(item["lit"].get<std::string>())});
      } catch (const Error& e) {
        throw Error(at + ": " + e.what());
      }
    } else if (item.contains("var")) {
      if (!item["var"].is_string()) throw Error(at + ": \"var\" must be a string");
      auto name = item["var"].get<std::string>();
      if (!doc.inst.langs.contains(name)) throw Error(at + ": undeclared variable '" + name + "'");
      t.push_back(VarRef{name});
    } else {
      throw Error(at + ": expected {\"lit\": ...} or {\"var\": ...}");
    }
  }
  return canonical_term(t);
}

}  // namespace detail

inline Document document_from_json(const Json& j) {
  detail::expect_keys(j, {"alphabet", "vars", "needle", "haystack"}, "instance");
  if (!j["alphabet"].is_string()) throw Error("instance: \"alphabet\" must be a string");
  Document doc;
  doc.inst.alphabet = Alphabet(j["alphabet"].get<std::string>());
  if (!j["vars"].is_array()) throw Error("instance: \"vars\" must be an array");
  for (std::size_t i = 0; i < j["vars"].size(); ++i) {
    const auto& v = j["vars"][i];
    const std::string at = "vars[" + std::to_string(i) + "]";
    detail::expect_keys(v, {"name", "regex"}, at);
    if (!v["name"].is_string() || !v["regex"].is_string()) throw Error(at + ": name and regex must be strings");
    auto name = v["name"].get<std::string>();
    auto text = v["regex"].get<std::string>();
    if (!detail::is_identifier(name)) throw Error(at + ": invalid variable name '" + name + "'");
    if (doc.inst.langs.contains(name)) throw Error(at + ": duplicate variable '" + name + "'");
    std::optional<Dfa> dfa;
    try {
      dfa = regex_dfa(text, doc.inst.alphabet);
    } catch (const Error& e) {
      throw Error(at + ": " + e.what());
    }
    if (!dfa) throw Error(at + ": the language of '" + name + "' is empty");
    doc.inst.langs.emplace(name, std::move(*dfa));
    doc.regex.emplace(name, text);
  }
  doc.inst.needle = detail::parse_term(j["needle"], doc, "needle");
  doc.inst.haystack = detail::parse_term(j["haystack"], doc, "haystack");
  return doc;
}

inline Document parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  return document_from_json(j);
}

inline Instance parse_instance(std::string_view text) { return parse_document(text).inst; }

inline Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

inline Json term_to_json(const Term& t, const Alphabet& alphabet) {
  Json arr = Json::array();
  for (const auto& item : t) {
    if (is_var(item)) {
      arr.push_back({{"var", var_name(item)}});
    } else {
      arr.push_back({{"lit", alphabet.decode(lit_word(item))}});
    }
  }
  return arr;
}

inline Json document_to_json(const Document& doc) {
  Json j;
  j["alphabet"] = doc.inst.alphabet.letters();
  j["vars"] = Json::array();
  for (const auto& [name, text] : doc.regex) j["vars"].push_back({{"name", name}, {"regex", text}});
  j["needle"] = term_to_json(doc.inst.needle, doc.inst.alphabet);
  j["haystack"] = term_to_json(doc.inst.haystack, doc.inst.alphabet);
  return j;
}

inline Json verdict_to_json(const Verdict& v, const Alphabet& alphabet, const BoundsProfile& profile) {
  Json j;
  j["status"] = to_string(v.status);
  if (v.status == Status::Sat) {
    j["model"] = Json::object();
    for (const auto& [x, w] : v.model) j["model"][x] = alphabet.decode(w);
  }
  if (v.status == Status::Unknown) j["reason"] = v.reason;
  j["profile"] = profile.name();
  j["stats"] = {{"disjuncts", v.stats.disjuncts},
                {"frames", v.stats.frames},
                {"paths", v.stats.paths},
                {"patterns", v.stats.patterns},
                {"checks", v.stats.checks}};
  return j;
}

/// Whether a verdict is consistent with the bounded oracle.
inline bool agrees_with_oracle(const Verdict& v, const OracleResult& o, std::size_t bound) {
  switch (v.status) {
    case Status::Sat: {
      if (o.status == OracleStatus::Sat) return true;
      if (o.status == OracleStatus::ExhaustedUnsat) return false;
      return std::any_of(v.model.begin(), v.model.end(), [&](const auto& kv) { return kv.second.size() > bound; });
    }
    case Status::Unsat: return o.status != OracleStatus::Sat;
    case Status::Unknown: return true;
  }
  return false;
}

}  // namespace notcontains
