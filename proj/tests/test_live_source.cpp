#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "census/fetcher.hpp"

using namespace census;

namespace {

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  LocalServer() {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html><body><a href=\"/people\">People</a></body></html>", "text/html; charset=utf-8");
    });
    server.Get("/latin", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<p>Jos\xe9</p>", "text/html; charset=ISO-8859-1");
    });
    server.Get("/file.pdf", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("%PDF-1.4", "application/pdf");
    });
    server.Get("/moved", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/"); });
    server.Get("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1500));
      res.set_content("<p>late</p>", "text/html");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port) + path; }
};

FetchPolicy quick_policy() {
  FetchPolicy p;
  p.min_delay_between_requests_per_host = std::chrono::milliseconds(0);
  p.timeout = std::chrono::milliseconds(500);
  return p;
}

}  // namespace

TEST_CASE("live source against a local server") {
  setenv("no_proxy", "127.0.0.1,localhost", 1);
  LocalServer srv;
  LiveSource src(quick_policy());

  const auto home = src.get(srv.url("/"));
  CHECK(home.status == PageStatus::Ok);
  CHECK(home.html.find("People") != std::string::npos);

  const auto latin = src.get(srv.url("/latin"));
  CHECK(latin.status == PageStatus::Ok);
  CHECK(latin.html == "<p>Jos\xc3\xa9</p>");

  CHECK(src.get(srv.url("/file.pdf")).status == PageStatus::NonHtml);
  CHECK(src.get(srv.url("/missing")).status == PageStatus::NotFound);
  CHECK(src.get(srv.url("/moved")).status == PageStatus::Ok);
  CHECK(src.get(srv.url("/slow")).status == PageStatus::Timeout);
}

TEST_CASE("per-host throttling spaces requests") {
  setenv("no_proxy", "127.0.0.1,localhost", 1);
  LocalServer srv;
  FetchPolicy p = quick_policy();
  p.min_delay_between_requests_per_host = std::chrono::milliseconds(150);
  LiveSource src(p);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 3; ++i) CHECK(src.get(srv.url("/")).status == PageStatus::Ok);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed >= std::chrono::milliseconds(300));
}
