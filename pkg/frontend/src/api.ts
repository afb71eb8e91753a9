/** Thin typed client for the pipeline HTTP API. */

import type { DecisionRequest, ItemView, QueueResponse } from "./types.js";

export interface ClientConfig {
  baseUrl: string;
  token?: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** 409 from the decision endpoint: the item changed under us. */
export class StaleItemError extends ApiError {}

export class ApiClient {
  constructor(private readonly config: ClientConfig) {}

  private headers(json = true): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.config.token) headers["Authorization"] = `Bearer ${this.config.token}`;
    return headers;
  }

  private async parseError(response: Response): Promise<string> {
    try {
      const body = (await response.json()) as { detail?: string };
      return body.detail ?? response.statusText;
    } catch {
      return response.statusText;
    }
  }

  async queue(page = 1, perPage = 20): Promise<QueueResponse> {
    const url = new URL("/items", this.config.baseUrl);
    url.searchParams.set("state", "pending_review");
    url.searchParams.set("page", String(page));
    url.searchParams.set("per_page", String(perPage));
    const response = await fetch(url, { headers: this.headers(false) });
    if (!response.ok) throw new ApiError(response.status, await this.parseError(response));
    return (await response.json()) as QueueResponse;
  }

  async item(id: string): Promise<ItemView> {
    const response = await fetch(new URL(`/items/${id}`, this.config.baseUrl), {
      headers: this.headers(false),
    });
    if (!response.ok) throw new ApiError(response.status, await this.parseError(response));
    return (await response.json()) as ItemView;
  }

  /** URL for the <audio> element; playback streams straight from the blob store. */
  audioUrl(id: string): string {
    return new URL(`/items/${id}/audio`, this.config.baseUrl).toString();
  }

  async submitDecision(id: string, body: DecisionRequest): Promise<ItemView> {
    const response = await fetch(new URL(`/items/${id}/decision`, this.config.baseUrl), {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify(body),
    });
    if (response.status === 409) {
      throw new StaleItemError(409, await this.parseError(response));
    }
    if (!response.ok) throw new ApiError(response.status, await this.parseError(response));
    return (await response.json()) as ItemView;
  }
}
