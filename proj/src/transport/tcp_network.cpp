#include "gem/transport/tcp_network.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "gem/engine/principal_engine.hpp"
#include "gem/transport/wire.hpp"

namespace gem {

TcpEndpoint parse_endpoint(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ConfigError("address '" + text + "' lacks a port");
  TcpEndpoint ep;
  ep.host = text.substr(0, colon);
  try {
    unsigned long port = std::stoul(text.substr(colon + 1));
    if (port > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception&) {
    throw ConfigError("bad port in address '" + text + "'");
  }
  return ep;
}

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const TcpEndpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  std::string host = ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw ConfigError("unsupported host '" + ep.host + "' (IPv4 literal expected)");
  }
  return addr;
}

void write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

struct TcpNetwork::Impl {
  struct Node {
    std::string name;
    PrincipalEngine* engine = nullptr;
    int listen_fd = -1;
    std::uint16_t port = 0;
    TcpEndpoint endpoint;

    std::mutex inbox_mutex;
    std::condition_variable inbox_cv;
    std::deque<Envelope> inbox;

    std::mutex out_mutex;
    std::map<std::string, int> outbound;
    SequenceCounter seq;

    std::thread acceptor;
    std::thread worker;
  };

  std::map<std::string, std::unique_ptr<Node>> nodes;
  std::atomic<bool> stopping{false};

  std::mutex conn_mutex;
  std::vector<int> accepted_fds;
  std::vector<std::thread> readers;

  std::mutex state_mutex;
  std::condition_variable state_cv;
  std::size_t in_flight = 0;
  std::exception_ptr failure;
  TrafficCounts counts;
  DeliveryObserver observer;

  void fail(std::exception_ptr e) {
    std::lock_guard lock(state_mutex);
    if (!failure) failure = e;
    state_cv.notify_all();
  }

  void listen(Node& node) {
    node.listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (node.listen_fd < 0) sys_fail("socket");
    int one = 1;
    ::setsockopt(node.listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr = make_addr(node.endpoint);
    if (::bind(node.listen_fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
      sys_fail("bind " + node.name);
    }
    if (::listen(node.listen_fd, 64) < 0) sys_fail("listen");
    socklen_t len = sizeof addr;
    ::getsockname(node.listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
    node.port = ntohs(addr.sin_port);
  }

  void accept_loop(Node& node) {
    while (!stopping) {
      int fd = ::accept(node.listen_fd, nullptr, nullptr);
      if (fd < 0) {
        if (errno == EINTR) continue;
        return;
      }
      std::lock_guard lock(conn_mutex);
      if (stopping) {
        ::close(fd);
        return;
      }
      accepted_fds.push_back(fd);
      readers.emplace_back([this, &node, fd] { read_loop(node, fd); });
    }
  }

  void read_loop(Node& node, int fd) {
    FrameReader reader;
    char buf[4096];
    try {
      while (!stopping) {
        ssize_t n = ::recv(fd, buf, sizeof buf, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        reader.feed(std::string_view(buf, static_cast<std::size_t>(n)));
        while (auto env = reader.next()) {
          if (env->to != node.name) {
            throw ConfigError("frame for " + env->to + " arrived at " + node.name);
          }
          std::lock_guard lock(node.inbox_mutex);
          node.inbox.push_back(std::move(*env));
          node.inbox_cv.notify_one();
        }
      }
      if (!stopping && reader.buffered() > 0) {
        throw WireError(0, "connection to " + node.name + " closed mid-frame");
      }
    } catch (...) {
      if (!stopping) fail(std::current_exception());
    }
  }

  int connect_to(Node& peer) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) sys_fail("socket");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    TcpEndpoint ep = peer.endpoint;
    ep.port = peer.port;
    if (ep.host == "0.0.0.0") ep.host = "127.0.0.1";
    sockaddr_in addr = make_addr(ep);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
      int saved = errno;
      ::close(fd);
      errno = saved;
      sys_fail("connect " + peer.name);
    }
    return fd;
  }

  // Called by the sender's worker (or the driver for the first message).
  void send(Node& from, Message message) {
    auto target = nodes.find(message.to);
    if (target == nodes.end()) {
      throw ConfigError("message from " + from.name + " to unknown principal " + message.to);
    }
    std::lock_guard lock(from.out_mutex);
    Envelope env{from.name, message.to, from.seq.next(from.name, message.to),
                 std::move(message.payload)};
    {
      std::lock_guard state(state_mutex);
      ++in_flight;
      counts.count(env.payload);
      if (observer) observer(env);
    }
    int& fd = from.outbound[env.to];
    if (fd <= 0) fd = connect_to(*target->second);
    write_all(fd, encode_frame(env));
  }

  void work(Node& node) {
    while (true) {
      Envelope env;
      {
        std::unique_lock lock(node.inbox_mutex);
        node.inbox_cv.wait(lock, [&] { return stopping || !node.inbox.empty(); });
        if (stopping) return;
        env = std::move(node.inbox.front());
        node.inbox.pop_front();
      }
      try {
        for (auto& m : node.engine->handle(env.payload)) send(node, std::move(m));
      } catch (...) {
        fail(std::current_exception());
        return;
      }
      std::lock_guard state(state_mutex);
      if (--in_flight == 0) state_cv.notify_all();
    }
  }

  void shutdown() {
    stopping = true;
    for (auto& [name, node] : nodes) {
      if (node->listen_fd >= 0) ::shutdown(node->listen_fd, SHUT_RDWR);
      {
        std::lock_guard lock(node->inbox_mutex);
        node->inbox_cv.notify_all();
      }
    }
    for (auto& [name, node] : nodes) {
      if (node->acceptor.joinable()) node->acceptor.join();
      if (node->worker.joinable()) node->worker.join();
      for (auto& [peer, fd] : node->outbound) {
        if (fd > 0) {
          ::shutdown(fd, SHUT_RDWR);
          ::close(fd);
        }
      }
      if (node->listen_fd >= 0) ::close(node->listen_fd);
    }
    std::vector<std::thread> pending;
    {
      std::lock_guard lock(conn_mutex);
      for (int fd : accepted_fds) ::shutdown(fd, SHUT_RDWR);
      pending.swap(readers);
    }
    for (auto& t : pending) t.join();
    for (int fd : accepted_fds) ::close(fd);
  }
};

TcpNetwork::TcpNetwork(const std::unordered_map<std::string, PrincipalEngine*>& engines,
                       const std::map<std::string, TcpEndpoint>& addresses)
    : impl_(std::make_unique<Impl>()) {
  for (const auto& [name, engine] : engines) {
    auto node = std::make_unique<Impl::Node>();
    node->name = name;
    node->engine = engine;
    if (auto it = addresses.find(name); it != addresses.end()) node->endpoint = it->second;
    impl_->nodes.emplace(name, std::move(node));
  }
  try {
    for (auto& [name, node] : impl_->nodes) impl_->listen(*node);
  } catch (...) {
    impl_->shutdown();
    throw;
  }
  for (auto& [name, node] : impl_->nodes) {
    Impl::Node& n = *node;
    n.acceptor = std::thread([this, &n] { impl_->accept_loop(n); });
    n.worker = std::thread([this, &n] { impl_->work(n); });
  }
}

TcpNetwork::~TcpNetwork() { impl_->shutdown(); }

std::uint16_t TcpNetwork::port_of(const std::string& principal) const {
  auto it = impl_->nodes.find(principal);
  if (it == impl_->nodes.end()) throw ConfigError("unknown principal " + principal);
  return it->second->port;
}

TrafficCounts TcpNetwork::run(const std::string& from, Message initial,
                              std::chrono::milliseconds timeout, const DeliveryObserver& observer) {
  auto it = impl_->nodes.find(from);
  if (it == impl_->nodes.end()) throw ConfigError("unknown requester " + from);
  {
    std::lock_guard lock(impl_->state_mutex);
    impl_->counts = {};
    impl_->observer = observer;
  }
  impl_->send(*it->second, std::move(initial));
  std::unique_lock lock(impl_->state_mutex);
  bool done = impl_->state_cv.wait_for(
      lock, timeout, [&] { return impl_->in_flight == 0 || impl_->failure != nullptr; });
  if (impl_->failure) std::rethrow_exception(impl_->failure);
  if (!done) {
    throw StepBudgetExceeded("no quiescence within " + std::to_string(timeout.count()) + " ms");
  }
  return impl_->counts;
}

}  // namespace gem
