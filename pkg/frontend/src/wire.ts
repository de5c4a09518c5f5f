/** Beacon wire format: {"v":1,"key":{"url":...,"hash":...},"ids":[...],"page":...} */

export interface BeaconMessage {
  v: number;
  key: { url: string; hash: string };
  ids: string[];
  page: string | null;
}

export function parseBeacon(payload: string): BeaconMessage {
  const doc = JSON.parse(payload);
  if (typeof doc !== "object" || doc === null) throw new Error("beacon is not an object");
  if (doc.v !== 1) throw new Error(`unsupported beacon version ${doc.v}`);
  if (typeof doc.key?.url !== "string" || typeof doc.key?.hash !== "string") {
    throw new Error("beacon key must carry url and hash strings");
  }
  if (!Array.isArray(doc.ids) || !doc.ids.every((i: unknown) => typeof i === "string")) {
    throw new Error("beacon ids must be an array of strings");
  }
  if (doc.page !== null && typeof doc.page !== "string") {
    throw new Error("beacon page must be a string or null");
  }
  return doc as BeaconMessage;
}
