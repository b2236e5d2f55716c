// service/service-test.cc

// Copyright 2026  The fieldasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include "httplib.h"

#include "base/error.h"
#include "base/io-util.h"
#include "eval/cer.h"
#include "eval/synth.h"
#include "feat/wave-io.h"
#include "service/http-api.h"
#include "service/pipeline.h"
#include "service/service.h"

namespace fieldasr {

namespace fs = std::filesystem;
using nlohmann::json;

static std::string Fixture(const std::string &name) {
  return ReadFileBytes(fs::path(FIELDASR_FIXTURE_DIR) / name);
}

static fs::path FreshDir(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("fieldasr-service-" + name);
  fs::remove_all(dir);
  return dir;
}

// 3 s of low noise, long enough for the fixture annotations.
static std::string NoiseWav(double seconds = 3.0, int rate = 16000) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<double> s(static_cast<size_t>(seconds * rate));
  for (double &v : s) v = n(rng);
  return EncodeWav(s, rate);
}

static ServiceOptions Opts(const fs::path &dir) {
  ServiceOptions o;
  o.state_dir = dir;
  return o;
}

static SynthAudioSpec AudioSpec(int n, uint64_t seed) {
  SynthAudioSpec s;
  s.alphabet = U"abc";
  s.num_utterances = n;
  s.seed = seed;
  return s;
}

// Synthetic wav+eaf pairs as uploads.
static std::vector<UploadedFile> SynthUploads(const SynthAudioSpec &spec, const std::string &tag) {
  fs::path dir = FreshDir("synth-" + tag);
  std::vector<UploadedFile> files;
  for (const std::string &stem : WriteSynthAudioCorpus(spec, dir.string())) {
    files.push_back({stem + ".wav", ReadFileBytes(dir / (stem + ".wav"))});
    files.push_back({stem + ".eaf", ReadFileBytes(dir / (stem + ".eaf"))});
  }
  fs::remove_all(dir);
  return files;
}

static json TinyModelRequest(const std::string &dataset, int epochs, int batch = 2) {
  return {{"dataset_id", dataset},
          {"model",
           {{"encoder_layers", 1}, {"hidden_size", 8}, {"decoder_hidden", 8},
            {"attention_dim", 8}}},
          {"train", {{"epochs", epochs}, {"batch_utterances", batch}, {"seed", 3}}},
          {"dev_fraction", 0.2}};
}

static int StatusOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const ApiError &e) {
    return e.status();
  }
  return 200;
}

// ---- state machine and log store

TEST_CASE("only queued->running->{done,failed} is legal") {
  const JobState all[] = {JobState::kQueued, JobState::kRunning, JobState::kDone,
                          JobState::kFailed};
  int legal = 0;
  for (JobState a : all)
    for (JobState b : all) {
      bool expect = (a == JobState::kQueued && b == JobState::kRunning) ||
                    (a == JobState::kRunning && (b == JobState::kDone || b == JobState::kFailed));
      CHECK(IsLegalTransition(a, b) == expect);
      legal += expect;
      JobRecord r;
      r.state = a;
      if (expect) {
        r.TransitionTo(b);
        CHECK(r.state == b);
      } else {
        try {
          r.TransitionTo(b);
          FAIL("illegal transition accepted");
        } catch (const Error &e) {
          CHECK(e.kind() == ErrorKind::kState);
          CHECK(r.state == a);
        }
      }
    }
  CHECK(legal == 3);
  JobRecord r;
  r.id = "job-0001";
  r.model_id = "m-0001";
  r.created_at = NowTimestamp();
  r.TransitionTo(JobState::kRunning);
  r.metrics.push_back({1, 2.5, 0.5, std::nan("")});
  r.TransitionTo(JobState::kDone);
  JobRecord back = JobFromJson(json::parse(JobToJson(r).dump()));
  CHECK(back.state == JobState::kDone);
  CHECK(back.started_at == r.started_at);
  CHECK(back.finished_at == r.finished_at);
  REQUIRE(back.metrics.size() == 1);
  CHECK(std::isnan(back.metrics[0].dev_cer));
  CHECK(back.metrics[0].train_loss == 2.5);
}

TEST_CASE("job log appends, waits and reloads") {
  fs::path dir = FreshDir("log");
  fs::create_directories(dir);
  {
    JobLog log(dir / "log.txt");
    CHECK(log.Append("first") == 0);
    CHECK(log.Append("two\nlines") == 1);
    CHECK(log.Read(0) == std::vector<std::string>{"first", "two lines"});
    CHECK(log.Read(1, 5) == std::vector<std::string>{"two lines"});
    CHECK(log.Read(7).empty());
    std::thread writer([&] {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      log.Append("late");
    });
    CHECK(log.WaitBeyond(2, std::chrono::seconds(5)));
    writer.join();
    CHECK(!log.WaitBeyond(3, std::chrono::milliseconds(1)));
    log.Close();
    CHECK(log.closed());
    CHECK_THROWS_AS(log.Append("x"), Error);
  }
  JobLog again(dir / "log.txt");
  CHECK(again.Read(0) == std::vector<std::string>{"first", "two lines", "late"});
  CHECK(FormatLogLine(12, "hi") == "seq 12 hi\n");
  fs::remove_all(dir);
}

TEST_CASE("decoding windows are 10 s with 1 s overlap") {
  auto w = DecodingWindows(16000, 16000);
  REQUIRE(w.size() == 1);
  CHECK(w[0].end == 16000);
  CHECK(DecodingWindows(160000, 16000).size() == 1);
  w = DecodingWindows(168000, 16000);
  REQUIRE(w.size() == 2);
  CHECK(w[1].begin == 144000);
  CHECK(w[1].end == 168000);
  CHECK(DecodingWindows(304000, 16000).size() == 2);
  w = DecodingWindows(304001, 16000);
  REQUIRE(w.size() == 3);
  CHECK(w[2].begin == 288000);
}

// ---- datasets

TEST_CASE("dataset uploads") {
  fs::path dir = FreshDir("datasets");
  Service service(Opts(dir));
  json d = service.CreateDataset({{"fixture.eaf", Fixture("fixture.eaf")},
                                  {"fixture.wav", NoiseWav()}},
                                 {{"name", "one"}});
  CHECK(d["summary"]["utterances"] == 1);
  CHECK(d["summary"]["speakers"] == json::array({"spk1"}));
  CHECK(service.GetDataset(d["id"]) == d);
  CHECK(StatusOf([&] { service.GetDataset("ds-9999"); }) == 404);

  json p = service.CreateDataset({{"fixture-pangloss.xml", Fixture("fixture-pangloss.xml")},
                                  {"fixture-pangloss.wav", NoiseWav()}},
                                 json::object());
  CHECK(p["summary"]["utterances"] == d["summary"]["utterances"]);
  CHECK(p["summary"]["total_minutes"] == d["summary"]["total_minutes"]);

  CHECK(StatusOf([&] { service.CreateDataset({{"fixture.wav", NoiseWav()}}, json::object()); }) ==
        422);
  try {
    service.CreateDataset({{"fixture.eaf", Fixture("fixture.eaf")}}, json::object());
    FAIL("expected 422");
  } catch (const ApiError &e) {
    CHECK(e.status() == 422);
    CHECK(e.body().dump().find("fixture") != std::string::npos);
    CHECK(e.body()["details"][0]["kind"] == "not found");
  }
  try {
    service.CreateDataset({{"bad.eaf", "<ANNOTATION_DOCUMENT><oops>"}, {"bad.wav", NoiseWav()}},
                          json::object());
    FAIL("expected 422");
  } catch (const ApiError &e) {
    CHECK(e.status() == 422);
    CHECK(e.body()["details"][0]["file"] == "bad.eaf");
  }
  CHECK(service.ListDatasets().size() == 2);
  // Comma removal applies at ingestion.
  std::string eaf = Fixture("fixture.eaf");
  eaf.replace(eaf.find(">kato<"), 6, ">ka,to<");
  json c = service.CreateDataset({{"fixture.eaf", eaf}, {"fixture.wav", NoiseWav()}},
                                 {{"clean", {{"remove_chars", ","}}}});
  CHECK(c["clean"]["remove_chars"] == ",");
  fs::remove_all(dir);
}

// ---- training jobs

TEST_CASE("training runs to done and enforces one job per model") {
  fs::path dir = FreshDir("train");
  std::vector<std::tuple<std::string, JobState, JobState>> seen;
  std::mutex seen_mu;
  ServiceOptions opt = Opts(dir);
  opt.on_transition = [&](const std::string &id, JobState a, JobState b) {
    std::lock_guard<std::mutex> lock(seen_mu);
    seen.emplace_back(id, a, b);
  };
  Service service(opt);
  json ds = service.CreateDataset(SynthUploads(AudioSpec(6, 1), "train"), json::object());
  json m = service.CreateModel(TinyModelRequest(ds["id"], 2));
  CHECK(m["state"] == "untrained");
  CHECK(m["engine"] == kEngineTag);
  CHECK(StatusOf([&] { service.StartTraining("m-9999"); }) == 404);
  json job = service.StartTraining(m["id"]);
  CHECK((job["state"] == "queued" || job["state"] == "running"));
  CHECK(StatusOf([&] { service.StartTraining(m["id"]); }) == 409);
  service.WaitIdle();
  json done = service.GetJob(job["id"]);
  CHECK(done["state"] == "done");
  CHECK(done["metrics"].size() == 2);
  CHECK(fs::exists(dir / "models" / m["id"].get<std::string>() / "model.ckpt"));
  CHECK(service.GetModel(m["id"])["state"] == "trained");
  std::vector<std::string> lines = service.JobLogFor(job["id"])->Read(0);
  auto find = [&](const std::string &prefix) {
    for (size_t i = 0; i < lines.size(); ++i)
      if (lines[i].rfind(prefix, 0) == 0) return i;
    return lines.size();
  };
  CHECK(find("epoch 1 train_loss") < find("epoch 2 train_loss"));
  CHECK(find("epoch 2 train_loss") < lines.size());
  CHECK(lines.back() == "job " + job["id"].get<std::string>() + " done");
  {
    std::lock_guard<std::mutex> lock(seen_mu);
    REQUIRE(seen.size() == 2);
    CHECK(std::get<1>(seen[0]) == JobState::kQueued);
    CHECK(std::get<2>(seen[0]) == JobState::kRunning);
    CHECK(std::get<2>(seen[1]) == JobState::kDone);
  }
  // Bad requests.
  CHECK(StatusOf([&] { service.CreateModel({{"dataset_id", "ds-9999"}}); }) == 404);
  CHECK(StatusOf([&] { service.CreateModel({{"dataset_id", ds["id"]}, {"engine", "kaldi"}}); }) ==
        422);
  CHECK(StatusOf([&] {
          service.CreateModel({{"dataset_id", ds["id"]}, {"train", {{"epochs", 0}}}});
        }) == 422);
  fs::remove_all(dir);
}

TEST_CASE("induced failures only produce legal transitions") {
  fs::path dir = FreshDir("failures");
  std::mutex mu;
  std::map<std::string, std::vector<std::pair<JobState, JobState>>> transitions;
  std::atomic<int> fail_at{-1};
  std::atomic<int> calls{0};
  ServiceOptions opt = Opts(dir);
  opt.on_transition = [&](const std::string &id, JobState a, JobState b) {
    std::lock_guard<std::mutex> lock(mu);
    transitions[id].emplace_back(a, b);
  };
  opt.on_log = [&](const std::string &, const std::string &) {
    if (calls++ == fail_at) Fail(ErrorKind::kNumeric, "induced failure");
  };
  Service service(opt);
  json ds = service.CreateDataset(SynthUploads(AudioSpec(5, 2), "fail"), json::object());
  json m = service.CreateModel(TinyModelRequest(ds["id"], 2));

  // Count hook calls in a clean run.
  calls = 0;
  json clean = service.StartTraining(m["id"]);
  service.WaitIdle();
  const int total = calls;
  REQUIRE(service.GetJob(clean["id"])["state"] == "done");
  REQUIRE(total > 4);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    int k = static_cast<int>(rng() % total);
    calls = 0;
    fail_at = k;
    json job = service.StartTraining(m["id"]);
    service.WaitIdle();
    json after = service.GetJob(job["id"]);
    CAPTURE(k);
    CHECK(after["state"] == "failed");
    CHECK(after["error"].get<std::string>().find("induced failure") != std::string::npos);
    CHECK(service.GetModel(m["id"])["state"] == "failed");
    CHECK(StatusOf([&] { service.Transcribe(m["id"], NoiseWav(1.0), DecodeOptions()); }) == 409);
  }
  fail_at = -1;
  json ok = service.StartTraining(m["id"]);
  service.WaitIdle();
  CHECK(service.GetJob(ok["id"])["state"] == "done");

  std::lock_guard<std::mutex> lock(mu);
  CHECK(transitions.size() == 14);
  for (const auto &[id, ts] : transitions) {
    CAPTURE(id);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].first == JobState::kQueued);
    CHECK(ts[0].second == JobState::kRunning);
    CHECK(ts[1].first == JobState::kRunning);
    CHECK(IsTerminal(ts[1].second));
    for (const auto &[a, b] : ts) CHECK(IsLegalTransition(a, b));
  }
  fs::remove_all(dir);
}

TEST_CASE("restart keeps state, fails interrupted jobs and requeues queued ones") {
  fs::path dir = FreshDir("restart");
  std::string ds_id, model_id, job_id;
  std::vector<std::string> log_before;
  json ds_before, model_before;
  {
    Service service(Opts(dir));
    ds_before = service.CreateDataset(SynthUploads(AudioSpec(5, 3), "restart"), json::object());
    ds_id = ds_before["id"];
    model_before = service.CreateModel(TinyModelRequest(ds_id, 1));
    model_id = model_before["id"];
    job_id = service.StartTraining(model_id)["id"];
    service.WaitIdle();
    log_before = service.JobLogFor(job_id)->Read(0);
    model_before = service.GetModel(model_id);
  }
  {
    Service service(Opts(dir));
    CHECK(service.GetDataset(ds_id) == ds_before);
    CHECK(service.GetModel(model_id) == model_before);
    CHECK(service.GetJob(job_id)["state"] == "done");
    CHECK(service.JobLogFor(job_id)->Read(0) == log_before);
    CHECK(service.JobLogFor(job_id)->closed());
  }
  // Forge a crash: one job left running, one still queued.
  json m2;
  {
    Service service(Opts(dir));
    m2 = service.CreateModel(TinyModelRequest(ds_id, 1));
  }
  auto forge = [&](const std::string &id, const std::string &model, JobState state) {
    JobRecord r;
    r.id = id;
    r.model_id = model;
    r.created_at = NowTimestamp();
    if (state != JobState::kQueued) r.TransitionTo(JobState::kRunning);
    fs::create_directories(dir / "jobs" / id);
    WriteFileBytes(dir / "jobs" / id / "meta.json", JobToJson(r).dump());
    WriteFileBytes(dir / "jobs" / id / "log.txt", "job " + id + " queued\n");
  };
  forge("job-0100", model_id, JobState::kRunning);
  forge("job-0101", m2["id"], JobState::kQueued);
  {
    json mm = json::parse(ReadFileBytes(dir / "models" / m2["id"].get<std::string>() / "meta.json"));
    mm["latest_job"] = "job-0101";
    WriteFileBytes(dir / "models" / m2["id"].get<std::string>() / "meta.json", mm.dump());
  }
  {
    Service service(Opts(dir));
    json crashed = service.GetJob("job-0100");
    CHECK(crashed["state"] == "failed");
    CHECK(crashed["error"] == "interrupted by a service restart");
    service.WaitIdle();
    CHECK(service.GetJob("job-0101")["state"] == "done");
    CHECK(service.GetModel(m2["id"])["state"] == "trained");
    std::vector<std::string> lines = service.JobLogFor("job-0101")->Read(0);
    CHECK(lines[1] == "requeued after a service restart");
  }
  fs::remove_all(dir);
}

TEST_CASE("a trained service model transcribes held-out synthetic audio") {
  fs::path dir = FreshDir("quality");
  Service service(Opts(dir));
  json ds = service.CreateDataset(SynthUploads(AudioSpec(40, 21), "quality"), json::object());
  json req = TinyModelRequest(ds["id"], 25, 1);
  req["model"] = {{"encoder_layers", 2}, {"hidden_size", 32}, {"decoder_hidden", 32},
                  {"attention_dim", 32}};
  req["dev_fraction"] = 0.0;
  std::string mid = service.CreateModel(req)["id"];
  std::string jid = service.StartTraining(mid)["id"];
  service.WaitIdle();
  REQUIRE(service.GetJob(jid)["state"] == "done");

  SynthAudioSpec held = AudioSpec(10, 99);
  fs::path hdir = FreshDir("quality-held");
  std::vector<TextPair> pairs;
  for (const std::string &stem : WriteSynthAudioCorpus(held, hdir.string())) {
    std::string eaf = ReadFileBytes(hdir / (stem + ".eaf"));
    size_t b = eaf.find("<ANNOTATION_VALUE>") + 18;
    std::string ref = eaf.substr(b, eaf.find("</ANNOTATION_VALUE>") - b);
    json r = service.Transcribe(mid, ReadFileBytes(hdir / (stem + ".wav")), DecodeOptions());
    pairs.emplace_back(ref, r["text"].get<std::string>());
  }
  double cer = CorpusCer(pairs).cer;
  MESSAGE("held-out cer " << 100 * cer << "%");
  CHECK(cer < 0.5);
  fs::remove_all(hdir);
  fs::remove_all(dir);
}

// ---- HTTP

struct LiveServer {
  explicit LiveServer(ServiceOptions opt) : service(std::move(opt)) {
    RegisterRoutes(server, service);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client Client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }
  Service service;
  httplib::Server server;
  int port = 0;
  std::thread thread;
};

static std::string Multipart(httplib::Client &c, const std::string &path,
                             const httplib::MultipartFormDataItems &items, int *status) {
  auto res = c.Post(path, items);
  REQUIRE(res);
  *status = res->status;
  return res->body;
}

// Lines "seq <n> <text>" parsed into (n, text).
struct StreamRead {
  std::vector<std::pair<size_t, std::string>> lines;
  bool completed = false;
};

static StreamRead ReadStream(httplib::Client &c, const std::string &job, size_t from,
                             size_t max_lines) {
  StreamRead out;
  std::string buf;
  auto res = c.Get("/jobs/" + job + "/logs?from=" + std::to_string(from),
                   [&](const char *data, size_t n) {
                     buf.append(data, n);
                     size_t nl;
                     while ((nl = buf.find('\n')) != std::string::npos) {
                       std::string line = buf.substr(0, nl);
                       buf.erase(0, nl + 1);
                       REQUIRE(line.rfind("seq ", 0) == 0);
                       size_t sp = line.find(' ', 4);
                       out.lines.emplace_back(std::stoul(line.substr(4, sp - 4)),
                                              line.substr(sp + 1));
                       if (out.lines.size() == max_lines) return false;  // disconnect
                     }
                     return true;
                   });
  out.completed = static_cast<bool>(res) && res->status == 200;
  return out;
}

TEST_CASE("http workflow: upload, train, stream, transcribe, export, import") {
  fs::path dir = FreshDir("http");
  LiveServer live(Opts(dir));
  httplib::Client c = live.Client();
  auto health = c.Get("/healthz");
  REQUIRE(health);
  CHECK(json::parse(health->body)["engine"] == kEngineTag);

  httplib::MultipartFormDataItems items;
  for (const UploadedFile &f : SynthUploads(AudioSpec(6, 4), "http"))
    items.push_back({"files", f.bytes, f.name, ""});
  items.push_back({"config", R"({"name": "synthetic"})", "", "application/json"});
  int status = 0;
  json ds = json::parse(Multipart(c, "/datasets", items, &status));
  REQUIRE(status == 201);
  CHECK(ds["summary"]["utterances"] == 6);
  CHECK(json::parse(c.Get("/datasets")->body).size() == 1);
  CHECK(c.Get("/datasets/nope")->status == 404);
  CHECK(c.Post("/datasets", "{}", "application/json")->status == 422);

  auto mres = c.Post("/models", TinyModelRequest(ds["id"], 2).dump(), "application/json");
  REQUIRE(mres->status == 201);
  std::string mid = json::parse(mres->body)["id"];
  CHECK(c.Post("/models", "not json", "application/json")->status == 422);
  CHECK(c.Post("/models/" + mid + "/transcribe", NoiseWav(1.0), "audio/wav")->status == 409);
  CHECK(c.Get("/models/" + mid + "/export")->status == 409);

  auto tres = c.Post("/models/" + mid + "/train");
  REQUIRE(tres->status == 202);
  std::string jid = json::parse(tres->body)["id"];
  CHECK(c.Post("/models/nope/train")->status == 404);
  CHECK(c.Get("/jobs/nope")->status == 404);
  CHECK(c.Get("/jobs/nope/logs")->status == 404);

  // Follow live until the job ends.
  StreamRead all = ReadStream(c, jid, 0, SIZE_MAX);
  CHECK(all.completed);
  json job = json::parse(c.Get("/jobs/" + jid)->body);
  CHECK(job["state"] == "done");
  REQUIRE(all.lines.size() == job["log_lines"].get<size_t>());
  for (size_t i = 0; i < all.lines.size(); ++i) CHECK(all.lines[i].first == i);
  StreamRead tail = ReadStream(c, jid, all.lines.size(), SIZE_MAX);
  CHECK(tail.completed);
  CHECK(tail.lines.empty());
  CHECK(ReadStream(c, jid, all.lines.size() + 10, SIZE_MAX).lines.empty());
  CHECK(c.Get("/jobs/" + jid + "/logs?from=-1")->status == 422);

  // Transcription: 1 s file is one window; deterministic.
  auto t1 = c.Post("/models/" + mid + "/transcribe", NoiseWav(1.0), "audio/wav");
  REQUIRE(t1->status == 200);
  json r1 = json::parse(t1->body);
  CHECK(r1["windows"].size() == 1);
  CHECK(c.Post("/models/" + mid + "/transcribe", NoiseWav(1.0), "audio/wav")->body == t1->body);
  CHECK(c.Post("/models/" + mid + "/transcribe", "garbage", "audio/wav")->status == 422);
  CHECK(c.Post("/models/" + mid + "/transcribe", NoiseWav(1.0, 8000), "audio/wav")->status == 422);
  httplib::MultipartFormDataItems audio = {{"audio", NoiseWav(1.0), "clip.wav", "audio/wav"}};
  CHECK(c.Post("/models/" + mid + "/transcribe", audio)->body == t1->body);

  // Export matches the file on disk; import gives identical transcriptions.
  auto ex = c.Get("/models/" + mid + "/export");
  REQUIRE(ex->status == 200);
  CHECK(ex->body == ReadFileBytes(dir / "models" / mid / "model.ckpt"));
  auto im = c.Post("/models/import?name=copy", ex->body, "application/octet-stream");
  REQUIRE(im->status == 201);
  json imported = json::parse(im->body);
  CHECK(imported["state"] == "trained");
  CHECK(imported["name"] == "copy");
  std::string mid2 = imported["id"];
  std::string clip = NoiseWav(2.5);
  CHECK(json::parse(c.Post("/models/" + mid2 + "/transcribe", clip, "audio/wav")->body)["text"] ==
        json::parse(c.Post("/models/" + mid + "/transcribe", clip, "audio/wav")->body)["text"]);
  CHECK(c.Post("/models/import", ex->body.substr(0, ex->body.size() / 2),
               "application/octet-stream")->status == 422);
  std::string v9 = ex->body;
  v9[4] = 9;
  auto bad = c.Post("/models/import", v9, "application/octet-stream");
  CHECK(bad->status == 422);
  CHECK(bad->body.find("expected 1") != std::string::npos);
  CHECK(json::parse(c.Get("/models")->body).size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("log stream reconnects at 100 random points without gaps or duplicates") {
  fs::path dir = FreshDir("reconnect");
  ServiceOptions opt = Opts(dir);
  // Slow the job down so most reconnects happen while it is still running.
  opt.on_log = [](const std::string &, const std::string &) {
    std::this_thread::sleep_for(std::chrono::milliseconds(4));
  };
  LiveServer live(opt);
  httplib::Client c = live.Client();
  json ds = live.service.CreateDataset(SynthUploads(AudioSpec(6, 5), "reconnect"),
                                       json::object());
  json m = live.service.CreateModel(TinyModelRequest(ds["id"], 60, 1));
  std::string jid = live.service.StartTraining(m["id"])["id"];

  std::mt19937_64 rng(11);
  std::vector<std::pair<size_t, std::string>> stitched;
  size_t next = 0;
  int disconnects = 0, while_running = 0;
  while (disconnects < 100) {
    size_t k = 1 + rng() % 4;
    bool running_before = !live.service.JobFinished(jid);
    StreamRead part = ReadStream(c, jid, next, k);
    for (const auto &l : part.lines) stitched.push_back(l);
    if (!part.lines.empty()) next = part.lines.back().first + 1;
    ++disconnects;
    while_running += running_before;
    if (part.completed && part.lines.size() < k) break;  // job over, log drained
  }
  StreamRead rest = ReadStream(c, jid, next, SIZE_MAX);
  CHECK(rest.completed);
  for (const auto &l : rest.lines) stitched.push_back(l);
  live.service.WaitIdle();

  StreamRead full = ReadStream(c, jid, 0, SIZE_MAX);
  MESSAGE(disconnects << " disconnects, " << while_running << " while running, "
                      << full.lines.size() << " lines");
  CHECK(disconnects == 100);
  CHECK(while_running >= 50);
  CHECK(stitched == full.lines);
  for (size_t i = 0; i < stitched.size(); ++i) CHECK(stitched[i].first == i);
  fs::remove_all(dir);
}

}  // namespace fieldasr
