/** Small DOM builders so the views stay framework-free. */

type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

/** Replace the node's children with an inline status line, or hide it. */
export function setNotice(node: HTMLElement, text: string | null, tone: "error" | "warn" | "info" = "info"): void {
  clear(node);
  node.classList.remove("error", "warn", "info");
  if (text === null) {
    node.hidden = true;
    return;
  }
  node.hidden = false;
  node.classList.add(tone);
  node.textContent = text;
}
