/**
 * Thin client for the local service. Naming, simulation previews and
 * trajectories come from here; rotation never does (it runs locally).
 */

export interface NameResult {
  name: string;
  variant: string;
  display_name: string;
  distance: number;
  nearest: { name: string; variant: string; display_name: string; distance: number }[];
}

export interface TrajectoryRecord {
  theta_deg: number;
  x: number;
  y: number;
  r: number;
  g: number;
  b: number;
}

export interface DictionaryEntry {
  name: string;
  variant: string;
  display_name: string;
  r: number;
  g: number;
  b: number;
}

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.message === "string") detail = body.message;
    } catch {
      // not JSON; keep the status text
    }
    throw new ServiceError(response.status, detail);
  }
  return response;
}

export class ServiceClient {
  constructor(private baseUrl: string = "") {}

  async nameColor(r: number, g: number, b: number, k = 3): Promise<NameResult> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/api/name?r=${r}&g=${g}&b=${b}&k=${k}`),
    );
    return response.json();
  }

  async dictionary(): Promise<DictionaryEntry[]> {
    const response = await expectOk(await fetch(`${this.baseUrl}/api/dictionary`));
    return (await response.json()).entries;
  }

  async trajectory(r: number, g: number, b: number, samples = 72): Promise<TrajectoryRecord[]> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/api/trajectory?r=${r}&g=${g}&b=${b}&samples=${samples}`),
    );
    return response.json();
  }

  async rotatePng(png: Blob | ArrayBuffer, thetaDeg: number): Promise<Blob> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/api/rotate?theta_deg=${thetaDeg}`, {
        method: "POST",
        headers: { "content-type": "image/png" },
        body: png,
      }),
    );
    return response.blob();
  }

  async simulatePng(png: Blob | ArrayBuffer, cvd: string): Promise<Blob> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/api/simulate?cvd=${encodeURIComponent(cvd)}`, {
        method: "POST",
        headers: { "content-type": "image/png" },
        body: png,
      }),
    );
    return response.blob();
  }
}
