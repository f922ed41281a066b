/**
 * server.ts — spawn the real trusskit API server for tests.
 *
 * `trusskit serve --port 0` announces the bound address on stdout; tests
 * parse it so every suite gets its own free port and a clean session.
 */

import { spawn, type ChildProcess } from 'node:child_process';

export interface LiveServer {
  base: string;
  stop(): Promise<void>;
}

function stopChild(child: ChildProcess): Promise<void> {
  return new Promise(resolve => {
    if (child.exitCode !== null) return resolve();
    child.once('exit', () => resolve());
    child.kill('SIGTERM');
    setTimeout(() => child.kill('SIGKILL'), 2000).unref();
  });
}

export function startServer(
  args: string[] = ['--shape', 'rhombus', '--n', '2'],
): Promise<LiveServer> {
  return new Promise((resolve, reject) => {
    const child = spawn('trusskit', ['serve', '--port', '0', ...args],
                        { stdio: ['ignore', 'pipe', 'pipe'] });
    let out = '';
    let done = false;
    const timer = setTimeout(() => {
      if (!done) reject(new Error(`server start timeout\n${out}`));
    }, 10_000);
    timer.unref();
    child.stdout!.on('data', (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/serving on (http:\/\/[\d.]+:\d+)\/api/);
      if (m && !done) {
        done = true;
        clearTimeout(timer);
        resolve({ base: m[1], stop: () => stopChild(child) });
      }
    });
    child.stderr!.on('data', (chunk: Buffer) => { out += chunk.toString(); });
    child.on('error', reject);
    child.on('exit', code => {
      if (!done) reject(new Error(`server exited early (${code})\n${out}`));
    });
  });
}
