#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// Tolerant HTML tree builder: enough of the HTML5 implied-end-tag rules to
/// recover list, table and div structure from real-world markup. No scripting,
/// no CSS, no namespace handling.
namespace census::html {

enum class NodeKind { Document, Element, Text };

struct Node {
  NodeKind kind = NodeKind::Element;
  std::string tag;  // lowercase; empty for text and document
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // entity-decoded, text nodes only
  Node* parent = nullptr;
  std::vector<std::unique_ptr<Node>> children;

  // Preorder index of this node and of its last descendant.
  std::size_t begin = 0;
  std::size_t end = 0;

  const std::string* attr(std::string_view name) const;
  bool is(std::string_view t) const { return kind == NodeKind::Element && tag == t; }
  bool contains(const Node& other) const { return other.begin >= begin && other.begin <= end; }
};

class Document {
 public:
  static Document parse(std::string_view html);

  const Node& root() const { return *root_; }

  /// Elements with the given tag in document order.
  std::vector<const Node*> elements(std::string_view tag) const;
  std::vector<const Node*> all_elements() const;

 private:
  std::unique_ptr<Node> root_;
};

std::string decode_entities(std::string_view s);

bool is_block(std::string_view tag);
bool is_heading(std::string_view tag);

/// Visible text, one line per block-level box (and per <br>), each line
/// whitespace-collapsed, blank lines dropped. Script/style/head are skipped.
std::string visible_text(const Node& node);

/// Visible text flattened to a single whitespace-collapsed line.
std::string inline_text(const Node& node);

std::string outer_html(const Node& node);

/// Nearest ancestor (or self) that is a block-level element; nullptr if none.
const Node* block_ancestor(const Node& node);

}  // namespace census::html
