#ifndef REXINFER_IO_H_
#define REXINFER_IO_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rexinfer/koa.h"
#include "rexinfer/pomm.h"
#include "rexinfer/regex.h"

namespace rexinfer {

// One word per line, symbols separated by single spaces, an empty line is
// the empty word and lines starting with '#' are comments. Throws
// InputError naming the line on malformed input.
Sample read_sample(std::istream& in, const std::string& source = "<input>");
Sample read_sample_file(const std::string& path);
// Words in sorted order, each repeated by its multiplicity.
void write_sample(std::ostream& out, const Sample& s);
void write_sample_file(const std::string& path, const Sample& s);

nlohmann::json koa_to_json(const Koa& g);
Koa koa_from_json(const nlohmann::json& j);
nlohmann::json pomm_to_json(const Pomm& p);

// Child-element name sequences per element name.
struct XmlExtraction {
  std::map<std::string, Sample> samples;
  std::vector<std::string> warnings;
};

// Scans one document and adds the child sequence of every element to
// `into`. Text, attributes, comments, processing instructions and the
// doctype are skipped. Throws InputError with source:line:col on
// malformed XML; elements mixing text and child elements add a warning.
void extract_child_sequences(std::istream& in, const std::string& source, XmlExtraction& into);
void extract_child_sequences_file(const std::string& path, XmlExtraction& into);

// DTD content model, e.g. "(id, (price | qty))". EPS gives "EMPTY".
std::string to_dtd_content(const Regex& r);

}  // namespace rexinfer

#endif  // REXINFER_IO_H_
