"""Validates real CLI --json output and HTTP responses against the schemas.

usage: check_schemas.py <herodraft binary>
"""

import json
import pathlib
import socket
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.request

import jsonschema

HERE = pathlib.Path(__file__).resolve().parent
failures = 0


def check(schema_name, doc, label):
    global failures
    schema = json.loads((HERE / schema_name).read_text())
    try:
        jsonschema.validate(doc, schema)
        print(f"ok    {label}")
    except jsonschema.ValidationError as e:
        failures += 1
        print(f"FAIL  {label}: {e.message} at {list(e.absolute_path)}")


def cli(binary, *args):
    proc = subprocess.run([binary, "--json", *args], capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def http(base, method, path, body=None):
    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=30) as r:
            return r.status, json.loads(r.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


def main():
    binary = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        t = pathlib.Path(tmp)
        data, model, rules = str(t / "m.jsonl"), str(t / "nn.json"), str(t / "rules.json")

        check("cli-synth.schema.json", cli(binary, "synth", "--matches", "2000", "--out", data), "synth")
        check("cli-train.schema.json",
              cli(binary, "train", "--data", data, "--hidden", "8", "--epochs", "2", "--out", model), "train")
        check("cli-eval.schema.json", cli(binary, "eval", "--model", model, "--data", data), "eval")
        check("cli-mine.schema.json",
              cli(binary, "mine", "--data", data, "--min-support", "0.01", "--out", rules), "mine")
        check("cli-tournament.schema.json",
              cli(binary, "tournament", "--a", "ar", "--b", "hwr", "--model", model, "--data", data,
                  "--rules", rules, "--sims", "6", "--traces"), "tournament")
        check("cli-sweep.schema.json",
              cli(binary, "sweep", "--model", model, "--iters", "20", "--cs", "2^-1,1", "--sims", "2"), "sweep")
        (t / "state.json").write_text(json.dumps({"schedule": "all_pick", "n_heroes": 20, "actions": [1, 2]}))
        check("cli-recommend.schema.json",
              cli(binary, "recommend", "--state", str(t / "state.json"), "--model", model, "--iters", "200"),
              "recommend")

        (t / "ui").mkdir()
        (t / "ui" / "index.html").write_text("<html></html>")
        port = free_port()
        server = subprocess.Popen([binary, "serve", "--model", model, "--port", str(port), "--iters", "300",
                                   "--static", str(t / "ui"), "--log", str(t / "log.jsonl")],
                                  stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        base = f"http://127.0.0.1:{port}"
        try:
            for _ in range(100):
                try:
                    status, health = http(base, "GET", "/healthz")
                    break
                except OSError:
                    time.sleep(0.05)
            else:
                raise RuntimeError("server did not come up")
            check("api-health.schema.json", health, "GET /healthz")
            check("api-heroes.schema.json", http(base, "GET", "/heroes")[1], "GET /heroes")

            status, session = http(base, "POST", "/sessions", {"assisted_team": "dire"})
            assert status == 201, status
            check("api-session.schema.json", session, "POST /sessions")
            sid = session["id"]
            check("api-session.schema.json", http(base, "POST", f"/sessions/{sid}/actions", {"hero": 4})[1],
                  "POST /sessions/{id}/actions")
            check("api-recommendation.schema.json",
                  http(base, "GET", f"/sessions/{sid}/recommendation?top_k=3")[1], "GET recommendation")
            check("api-what-if.schema.json", http(base, "GET", f"/sessions/{sid}/what-if?hero=9")[1],
                  "GET what-if (searched)")
            status, err = http(base, "POST", f"/sessions/{sid}/actions", {"hero": 4})
            assert status == 409, status
            check("api-error.schema.json", err, "409 illegal action")
            check("api-error.schema.json", http(base, "GET", "/sessions/nope")[1], "404 unknown session")

            for hero in (5, 6, 7, 8, 9, 10, 11, 12):
                http(base, "POST", f"/sessions/{sid}/actions", {"hero": hero})
            check("api-what-if.schema.json", http(base, "GET", f"/sessions/{sid}/what-if?hero=13")[1],
                  "GET what-if (exact)")
            status, final = http(base, "POST", f"/sessions/{sid}/actions", {"hero": 13})
            check("api-session.schema.json", final, "terminal session")
            assert final["terminal"] and "final" in final
            with urllib.request.urlopen(base + "/index.html", timeout=10) as r:
                assert r.read() == b"<html></html>"
                print("ok    static asset")
        finally:
            server.terminate()
            server.wait(timeout=10)

    print(f"{failures} schema failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
