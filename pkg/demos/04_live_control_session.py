"""Walkthrough: a scripted live session against the control service.

Starts the pipeline on the looping open-close scenario, connects a headless
WebSocket client, watches telemetry, changes the segmentation thresholds on
the fly, and observes the effect within two frames.
Run: python3 demos/04_live_control_session.py
"""

import json

from fastapi.testclient import TestClient

from mouthpipe.config import RuntimeConfig
from mouthpipe.control_service import PipelineRunner, create_app
from mouthpipe.data import open_close_path
from mouthpipe.frame_io import Scenario, scenario_frames

scenario = Scenario.from_json(open_close_path().read_text())
runner = PipelineRunner(lambda: scenario_frames(scenario), RuntimeConfig(),
                        pace=True, loop_source=True)
app = create_app(runner)
runner.start()

client = TestClient(app)
with client.websocket_connect("/ws") as ws:
    def recv():
        return json.loads(ws.receive_text())

    print("watching telemetry...")
    seen = 0
    while seen < 5:
        msg = recv()
        if msg["type"] == "telemetry":
            seen += 1
            sp = msg["shape"]
            print(f"  frame {msg['frame']:3d}  blob={msg['blob']}  "
                  f"height={sp['height']:5.1f}  cc={msg['cc']}  "
                  f"rev={msg['revision']}")

    print("\nsending set_thresholds that select nothing...")
    ws.send_text(json.dumps({"type": "set_thresholds", "i_min": 0, "r_max": 255}))
    ack = None
    while ack is None:
        msg = recv()
        if msg["type"] == "ack":
            ack = msg
            print(f"  ack, revision {ack['revision']}")

    while True:
        msg = recv()
        if msg["type"] == "telemetry" and msg["revision"] >= ack["revision"]:
            print(f"  frame {msg['frame']}: new config applied, "
                  f"blob={msg['blob']} (tracking lost as expected)")
            break

    print("\nfetching the full config...")
    ws.send_text(json.dumps({"type": "get_config"}))
    while True:
        msg = recv()
        if msg["type"] == "config":
            print(f"  segmentation now: {msg['config']['segmentation']}")
            break

runner.stop()
runner.join(timeout=2)
print("\nfor a real deployment: mouthpipe run --source <scenario.json> "
      "--listen 127.0.0.1:8765, then open frontend/index.html")
