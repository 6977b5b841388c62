#include <doctest.h>

#include "census/html.hpp"

using namespace census;

TEST_CASE("entities decode to utf-8") {
  CHECK(html::decode_entities("a &amp; b &lt;c&gt; &quot;d&quot;") == "a & b <c> \"d\"");
  CHECK(html::decode_entities("&middot;&#233;&#xE9;&nbsp;") == "\xc2\xb7\xc3\xa9\xc3\xa9 ");  // nbsp becomes a plain space
  CHECK(html::decode_entities("&bogus; &") == "&bogus; &");
}

TEST_CASE("implied end tags recover list and table structure") {
  const auto doc = html::Document::parse(
      "<ul><li>one<li>two<li>three</ul>"
      "<table><tr><td>a<td>b<tr><td>c<td>d</table>");
  CHECK(doc.elements("li").size() == 3);
  CHECK(doc.elements("tr").size() == 2);
  CHECK(doc.elements("td").size() == 4);
  for (const auto* li : doc.elements("li")) CHECK(li->parent->is("ul"));
}

TEST_CASE("attributes are case-insensitive by name and keep values") {
  const auto doc = html::Document::parse("<DIV CLASS='card x' data-id=7><a href=\"/p?q=1&amp;r=2\">x</a></DIV>");
  const auto divs = doc.elements("div");
  REQUIRE(divs.size() == 1);
  REQUIRE(divs[0]->attr("class"));
  CHECK(*divs[0]->attr("class") == "card x");
  CHECK(*divs[0]->attr("data-id") == "7");
  CHECK(*doc.elements("a")[0]->attr("href") == "/p?q=1&r=2");
  CHECK(divs[0]->attr("missing") == nullptr);
}

TEST_CASE("visible text breaks lines at blocks and skips scripts") {
  const auto doc = html::Document::parse(
      "<html><head><title>T</title><style>.a{}</style></head><body>"
      "<div>Jane <b>Doe</b></div><p>Professor<br>Office 1</p>"
      "<script>var s = '<div>x</div>';</script></body></html>");
  CHECK(html::visible_text(doc.root()) == "Jane Doe\nProfessor\nOffice 1");
  CHECK(html::inline_text(doc.root()) == "Jane Doe Professor Office 1");
}

TEST_CASE("block ancestor and containment") {
  const auto doc = html::Document::parse("<div><span><a href='x'>link</a></span></div><a href='y'>bare</a>");
  const auto anchors = doc.elements("a");
  REQUIRE(anchors.size() == 2);
  const auto* b = html::block_ancestor(*anchors[0]);
  REQUIRE(b);
  CHECK(b->is("div"));
  CHECK(b->contains(*anchors[0]));
  CHECK_FALSE(b->contains(*anchors[1]));
  CHECK(html::block_ancestor(*anchors[1]) == nullptr);
}

TEST_CASE("outer html re-serializes an element") {
  const auto doc = html::Document::parse("<p class=\"t\">a &amp; b<br></p>");
  const auto p = html::outer_html(*doc.elements("p")[0]);
  CHECK(p.find("<p class=\"t\">") == 0);
  CHECK(p.find("a &amp; b") != std::string::npos);
  const auto again = html::Document::parse(p);
  CHECK(html::inline_text(again.root()) == "a & b");
}

TEST_CASE("malformed markup does not throw") {
  CHECK_NOTHROW(html::Document::parse("<div><p>unclosed <b>bold <i>it</div></b> <<>> </table>"));
  CHECK_NOTHROW(html::Document::parse(""));
  CHECK_NOTHROW(html::Document::parse("<!-- open comment"));
}
