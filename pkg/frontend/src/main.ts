/**
 * Browser bootstrap. Annotator screens need ?annotator=<id>; the campaign
 * owner opens ?view=progress (plus &owner=1 for the report tables).
 */

import { ApiClient } from "./api.js";
import { AnnotatorApp } from "./app.js";
import { renderProgressScreen } from "./render.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient("");

  if (params.get("view") === "progress") {
    const progress = await api.progress();
    const isOwner = params.get("owner") === "1";
    // Per-system tables stay hidden from annotators until the campaign is
    // complete; the owner view may inspect the partial report at any time.
    const report = isOwner ? await api.reportRaw() : null;
    renderProgressScreen(root, progress, report);
    return;
  }

  const annotator = params.get("annotator") ?? window.localStorage.getItem("lowmt-annotator");
  if (!annotator) {
    root.textContent = "Add ?annotator=<your id> to the URL to begin annotating.";
    return;
  }
  window.localStorage.setItem("lowmt-annotator", annotator);
  const app = new AnnotatorApp(root, api, annotator, window.localStorage);
  await app.start();
}

void boot();
