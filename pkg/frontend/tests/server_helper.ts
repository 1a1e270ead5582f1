/** Spawn the Python service on an ephemeral port for integration tests. */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RunningServer {
  port: number;
  baseUrl: string;
  storeDir: string;
  stop(): Promise<void>;
}

export async function startServer(storeDir?: string): Promise<RunningServer> {
  const dir = mkdtempSync(join(tmpdir(), "stemma-ui-test-"));
  const store = storeDir ?? join(dir, "store");
  const configPath = join(dir, "svc.conf");
  writeFileSync(configPath, `storage.path = ${store}\n`);

  const proc: ChildProcess = spawn(
    "python3",
    ["-m", "stemma.cli", "serve", "--config", configPath, "--port", "0"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );

  const port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("server start timeout")), 15000);
    let buffer = "";
    proc.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const m = buffer.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    proc.stderr!.on("data", () => {});
    proc.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early with code ${code}`));
    });
  });

  return {
    port,
    baseUrl: `http://127.0.0.1:${port}`,
    storeDir: store,
    stop: () =>
      new Promise<void>((resolve) => {
        proc.once("exit", () => resolve());
        proc.kill("SIGTERM");
        setTimeout(() => {
          if (proc.exitCode === null) proc.kill("SIGKILL");
        }, 5000).unref();
      }),
  };
}
