#!/usr/bin/env python3
"""Walk the byte classifier through a tiny hand-made JPEG.

The embedded file is a 16x8 grayscale baseline JPEG, two blocks, built with
the standard luminance tables.  Its seven scan-data bytes hit every situation
the classifier has to handle:

  * a byte that is pure Huffman code and happens to be FF,
  * the stuffed 00 that must follow it,
  * bytes mixing Huffman bits with amplitude ("additional") bits,
  * 1-fill padding at the tail.

Run it to see, byte by byte, which bits encryption may touch and why the
rest must stay exactly as the encoder wrote them.
"""

from jpegcrypt import classify_entropy_bytes, label_document, parse_document
from jpegcrypt.scanner import dump_byte_rows

TINY_JPEG = bytes.fromhex(
    "ffd8ffdb004300080808080808080808080808080808080808080808080808080808"
    "08080808080808080808080808080808080808080808080808080808080808080808"
    "080808ffc0000b080008001001011100ffc400d20000010501010101010100000000"
    "000000000102030405060708090a0b100002010303020403050504040000017d0102"
    "0300041105122131410613516107227114328191a1082342b1c11552d1f024336272"
    "82090a161718191a25262728292a3435363738393a434445464748494a5354555657"
    "58595a636465666768696a737475767778797a838485868788898a92939495969798"
    "999aa2a3a4a5a6a7a8a9aab2b3b4b5b6b7b8b9bac2c3c4c5c6c7c8c9cad2d3d4d5d6"
    "d7d8d9dae1e2e3e4e5e6e7e8e9eaf1f2f3f4f5f6f7f8f9faffda0008010100003f00"
    "ff007ff969bbabffd9"
)


def main():
    doc = parse_document(TINY_JPEG)
    print("parsed %d elements:" % len(doc.elements))
    for element in doc.elements:
        print("  %-9s offset %3d  %4d bytes" % (element.name, element.offset, len(element.raw)))

    (_, label_map), = label_document(doc)
    print("\nscan data: %s" % label_map.span.hex(" "))
    print("\n%8s  %-2s  %-8s  %s" % ("offset", "", "bits are", "verdict"))
    for row in dump_byte_rows(label_map, classify_entropy_bytes(label_map, "both")):
        verdict = (
            "encrypt the bits under mask %s" % row["mask"]
            if row["verdict"] == "encrypt"
            else "leave alone (%s)" % row["reason"]
        )
        print("%8d  %s  %s  %s" % (row["offset"], row["hex"], row["labels"], verdict))

    print(
        "\nlegend: H Huffman code bit, A additional (amplitude) bit,"
        "\n        S stuffed zero byte, P 1-fill padding, R restart marker"
        "\n"
        "\nThe FF byte is all Huffman code, so nothing in it may change; the 00"
        "\nafter it exists only because of that FF and must survive verbatim."
        "\nBytes with amplitude bits are encryptable exactly when some fixed bit"
        "\nis 0 - then no keystream can ever turn the byte into a fake marker."
    )


if __name__ == "__main__":
    main()
